"""Exact arithmetic in finite fields F_{p^n}.

Fields carry a deterministic modulus (the least monic irreducible of degree n
over F_p under the coefficient encoding c0 + c1*p + ... ), so that every run
of every computation produces bit-identical results.  Elements are immutable
coordinate vectors over the prime field, least degree first.

Embeddings between F_{p^a} and F_{p^b} (a | b) are fixed once per pair and
built by composing single prime-degree hops along the ascending prime
factorisation of b/a; the hop maps send the source generator to the least
root of the source modulus in the target.  Repeated calls always return the
same map.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import linalg


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            if not out or out[-1] != d:
                out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- bare int-list polynomial helpers over F_p, used only for modulus search --

def _pm_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pm_mulmod(a, b, mod, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pm_rem(out, mod, p)


def _pm_rem(a, mod, p):
    a = list(a)
    dm = len(mod) - 1
    inv = pow(mod[-1], p - 2, p)
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            f = c * inv % p
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - f * mod[j]) % p
    del a[dm:]
    return _pm_trim(a)


def _pm_powmod(a, e, mod, p):
    r = [1]
    a = _pm_rem(a, mod, p)
    while e:
        if e & 1:
            r = _pm_mulmod(r, a, mod, p)
        a = _pm_mulmod(a, a, mod, p)
        e >>= 1
    return r


def _pm_gcd(a, b, p):
    a, b = _pm_trim(list(a)), _pm_trim(list(b))
    while b:
        if len(a) < len(b):
            a, b = b, a
            continue
        a, b = b, _pm_rem(a, b, p)
    return a


def _np_rem(a: np.ndarray, mod: np.ndarray, p: int) -> np.ndarray:
    """Remainder of int64 coefficient arrays modulo a monic polynomial."""
    a = a % p
    dm = mod.shape[0] - 1
    for i in range(a.shape[0] - 1, dm - 1, -1):
        c = a[i]
        if c:
            a[i - dm:i + 1] = (a[i - dm:i + 1] - c * mod) % p
    out = a[:dm]
    nz = np.nonzero(out)[0]
    return out[:nz[-1] + 1] if nz.size else out[:0]


def _np_mulmod(a, b, mod, p):
    return _np_rem(np.convolve(a, b) % p, mod, p)


def _np_gcd(a, b, p):
    while b.size:
        if a.size < b.size:
            a, b = b, a
            continue
        inv = pow(int(b[-1]), p - 2, p)
        a, b = b, _np_rem(a.copy(), (b * inv) % p, p)
    return a


def _is_irreducible(coeffs, p) -> bool:
    """Irreducibility of a monic degree-n polynomial over F_p.

    Walks the Frobenius chain x -> x^p mod f, aborting at the subfield
    checkpoints n/ell; a root scan over F_p cheaply rejects most inputs
    before the chain starts.
    """
    n = len(coeffs) - 1
    if n == 1:
        return True
    f = np.array(coeffs, dtype=np.int64) % p
    # quick rejection: any root in the prime field means a linear factor
    xs = np.arange(p, dtype=np.int64)
    vals = np.zeros(p, dtype=np.int64)
    for c in f[::-1]:
        vals = (vals * xs + int(c)) % p
    if not vals.all():
        return False
    checkpoints = {n // ell for ell in _prime_factors(n)}
    x = np.array([0, 1], dtype=np.int64)
    t = x.copy()
    for k in range(1, n + 1):
        # t <- t^p mod f by binary powering
        acc = np.array([1], dtype=np.int64)
        sq = t
        e = p
        while e:
            if e & 1:
                acc = _np_mulmod(acc, sq, f, p)
            e >>= 1
            if e:
                sq = _np_mulmod(sq, sq, f, p)
        t = acc
        if k in checkpoints and k < n:
            diff = t.copy() if t.size >= 2 else np.concatenate(
                [t, np.zeros(2 - t.size, dtype=np.int64)])
            diff[1] = (diff[1] - 1) % p
            nz = np.nonzero(diff)[0]
            diff = diff[:nz[-1] + 1] if nz.size else diff[:0]
            if _np_gcd(f.copy(), diff, p).size > 1:
                return False
    # x^(p^n) must equal x
    diff = np.zeros(max(t.size, 2), dtype=np.int64)
    diff[:t.size] = t
    diff[1] = (diff[1] - 1) % p
    return not diff.any()


@functools.lru_cache(maxsize=None)
def _least_irreducible(p: int, n: int) -> tuple[int, ...]:
    """Least monic irreducible of degree n over F_p (x itself for n=1)."""
    if n == 1:
        return (0, 1)
    for code in range(p ** n):
        coeffs = []
        c = code
        for _ in range(n):
            coeffs.append(c % p)
            c //= p
        coeffs.append(1)
        if coeffs[0] == 0:
            continue
        if _is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise RuntimeError("no irreducible polynomial found (impossible)")


class Field:
    """The finite field F_{p^n} with a fixed monic irreducible modulus."""

    def __init__(self, p: int, n: int, modulus=None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if n < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.n = n
        if modulus is None:
            modulus = _least_irreducible(p, n)
        else:
            modulus = tuple(c % p for c in modulus)
            if len(modulus) != n + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree n")
            if n > 1 and not _is_irreducible(list(modulus), p):
                raise ValueError("modulus is reducible")
        self.modulus = modulus
        self.order = p ** n
        # x^(n+k) mod modulus for k = 0..n-2, as rows
        red = np.zeros((max(n - 1, 0), n), dtype=np.int64)
        cur = [(-c) % p for c in modulus[:-1]]
        for k in range(n - 1):
            red[k, :] = cur
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for j in range(n):
                    cur[j] = (cur[j] - top * modulus[j]) % p
        self._red = red
        self._frob_mat = None
        self._pth_root_mat = None
        self._struct = None

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, Field) and self.p == other.p
                and self.n == other.n and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.p, self.n, self.modulus))

    def __repr__(self):
        return f"F_{self.p}" if self.n == 1 else f"F_{self.p}^{self.n}"

    # -- coordinate arithmetic (numpy batches of shape (..., n)) ------------

    def reduce_coords(self, raw: np.ndarray) -> np.ndarray:
        """Reduce coordinate vectors of length up to 2n-1 to length n."""
        raw = raw % self.p
        if raw.shape[-1] <= self.n:
            out = np.zeros(raw.shape[:-1] + (self.n,), dtype=np.int64)
            out[..., :raw.shape[-1]] = raw
            return out
        head = raw[..., :self.n]
        tail = raw[..., self.n:]
        return (head + tail @ self._red[:tail.shape[-1], :]) % self.p

    def structure_tensor(self) -> np.ndarray:
        """S[i, j] = coordinates of gamma^i * gamma^j (lazy, cached)."""
        if self._struct is None:
            n = self.n
            s = np.zeros((n, n, 2 * n - 1), dtype=np.int64)
            for i in range(n):
                for j in range(n):
                    s[i, j, i + j] = 1
            self._struct = self.reduce_coords(s)
        return self._struct

    def _band_matrix(self, b: np.ndarray) -> np.ndarray:
        """(n, 2n-1) matrix whose row i is b shifted right by i."""
        n = self.n
        w = 2 * n - 1
        z = np.zeros((n, w + 1), dtype=np.int64)
        z[:, :n] = b
        return z.ravel()[:n * w].reshape(n, w)

    def mul_coords(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Product of coordinate batches; broadcasts over leading axes."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        n = self.n
        if n == 1:
            return (a * b) % self.p
        if a.ndim == 1 and b.ndim == 1:
            return self.reduce_coords(np.convolve(a, b))
        if n > 3:
            if b.ndim == 1:
                return self.reduce_coords(a @ self._band_matrix(b))
            if a.ndim == 1:
                return self.reduce_coords(b @ self._band_matrix(a))
            s = self.structure_tensor()
            return np.einsum("...i,ijk,...j->...k", a, s, b) % self.p
        out = np.zeros(np.broadcast_shapes(a.shape[:-1], b.shape[:-1]) + (2 * n - 1,),
                       dtype=np.int64)
        for i in range(n):
            out[..., i:i + n] += a[..., i:i + 1] * b
        return self.reduce_coords(out)

    def frobenius_matrix(self) -> np.ndarray:
        """Matrix of x -> x^p on coordinate vectors (F_p-linear)."""
        if self._frob_mat is None:
            cols = []
            for i in range(self.n):
                e = self.element([0] * i + [1])
                cols.append((e ** self.p).coords)
            self._frob_mat = np.array(cols, dtype=np.int64).T % self.p
        return self._frob_mat

    def pth_root_matrix(self) -> np.ndarray:
        """Matrix of the inverse Frobenius x -> x^(p^(n-1))."""
        if self._pth_root_mat is None:
            m = np.eye(self.n, dtype=np.int64)
            f = self.frobenius_matrix()
            for _ in range(self.n - 1):
                m = linalg.matmul(f, m, self.p)
            self._pth_root_mat = m
        return self._pth_root_mat

    # -- element constructors ------------------------------------------------

    def element(self, coords) -> "FieldElement":
        if isinstance(coords, FieldElement):
            if coords.field == self:
                return coords
            raise ValueError("element belongs to a different field")
        if isinstance(coords, (int, np.integer)):
            c = [int(coords) % self.p] + [0] * (self.n - 1)
            return FieldElement(self, tuple(c))
        coords = [int(c) % self.p for c in coords]
        if len(coords) > self.n:
            raise ValueError("too many coordinates")
        coords += [0] * (self.n - len(coords))
        return FieldElement(self, tuple(coords))

    def zero(self) -> "FieldElement":
        return self.element(0)

    def one(self) -> "FieldElement":
        return self.element(1)

    def generator(self) -> "FieldElement":
        """The class of x (equals 0 for the prime field, whose modulus is x)."""
        if self.n == 1:
            return self.zero()
        return self.element([0, 1])

    def elements(self):
        """All field elements in ascending coordinate order."""
        p, n = self.p, self.n
        for code in range(self.order):
            coords = []
            c = code
            for _ in range(n):
                coords.append(c % p)
                c //= p
            yield FieldElement(self, tuple(reversed(coords)))

    def random(self, rng) -> "FieldElement":
        return FieldElement(self, tuple(rng.randrange(self.p) for _ in range(self.n)))

    def to_json(self):
        return {"p": self.p, "n": self.n, "modulus": list(self.modulus)}

    @staticmethod
    def from_json(obj) -> "Field":
        f = field(obj["p"], obj["n"])
        if list(f.modulus) == list(obj["modulus"]):
            return f
        return Field(obj["p"], obj["n"], obj["modulus"])


@functools.lru_cache(maxsize=None)
def field(p: int, n: int = 1) -> Field:
    """The canonical F_{p^n} (deterministic least modulus), interned."""
    return Field(p, n)


@dataclass(frozen=True)
class FieldElement:
    """Element of F_{p^n}: immutable coordinates, least degree first."""

    field: Field
    coords: tuple

    def _lift(self, other):
        if isinstance(other, FieldElement):
            if other.field == self.field:
                return other
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")
        if isinstance(other, (int, np.integer)):
            return self.field.element(int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        p = self.field.p
        return FieldElement(self.field,
                            tuple((a + b) % p for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple((-a) % p for a in self.coords))

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        f = self.field
        if f.n == 1:
            return FieldElement(f, ((self.coords[0] * o.coords[0]) % f.p,))
        raw = f.mul_coords(np.array(self.coords), np.array(o.coords))
        return FieldElement(f, tuple(int(c) for c in raw))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        f = self.field
        if f.n == 1:
            return FieldElement(f, (pow(self.coords[0], f.p - 2, f.p),))
        # extended Euclid of the coordinate polynomial against the modulus
        p = f.p
        r0, s0 = _pm_trim(list(self.coords)), [1]
        r1, s1 = list(f.modulus), []
        while r1:
            q, r = _pm_divmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, _pm_sub(s0, _pm_mul(q, s1, p), p)
        inv_c = pow(r0[0], p - 2, p)
        return f.element([(c * inv_c) % p for c in s0])

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        r = self.field.one()
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = self.field.element(int(other))
        return (isinstance(other, FieldElement) and self.field == other.field
                and self.coords == other.coords)

    def __hash__(self):
        return hash((self.field, self.coords))

    def __bool__(self):
        return any(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def in_prime_field(self) -> bool:
        return not any(self.coords[1:])

    def __repr__(self):
        if self.field.n == 1:
            return f"{self.coords[0]}"
        return f"{list(self.coords)}/{self.field!r}"

    def sort_key(self):
        """Canonical ordering key (plain coordinate order)."""
        return self.coords

    def minimal_polynomial(self) -> list[int]:
        """Minimal polynomial over F_p as an int coefficient list."""
        orbit = [self]
        cur = self ** self.field.p
        while cur != self:
            orbit.append(cur)
            cur = cur ** self.field.p
        # expand prod (T - c) with FieldElement coefficients
        prod = [self.field.one()]
        for c in orbit:
            nxt = [self.field.zero()] * (len(prod) + 1)
            for i, q in enumerate(prod):
                nxt[i + 1] = nxt[i + 1] + q
                nxt[i] = nxt[i] - c * q
            prod = nxt
        out = []
        for q in prod:
            if not q.in_prime_field():
                raise AssertionError("minimal polynomial not over F_p")
            out.append(q.coords[0])
        return out

    def to_json(self):
        return list(self.coords)


# int-list helpers shared with the inverse computation
def _pm_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pm_trim(out)


def _pm_sub(a, b, p):
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _pm_trim(out)


def _pm_divmod(a, b, p):
    a = list(a)
    db, dm = len(b) - 1, len(a) - len(b)
    if dm < 0:
        return [], _pm_trim(a)
    inv = pow(b[-1], p - 2, p)
    q = [0] * (dm + 1)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] % p
        if c:
            f = c * inv % p
            q[i - db] = f
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - f * b[j]) % p
    return _pm_trim(q), _pm_trim(a[:db])


# -- Frobenius inverse ---------------------------------------------------------

def frobenius_inverse(x: FieldElement) -> FieldElement:
    """The unique y with y^p = x, namely x^(p^(n-1))."""
    n = x.field.n
    if n == 1:
        return x
    return x ** (x.field.p ** (n - 1))


# -- embeddings ---------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def _embedding_matrix(src: Field, dst: Field) -> np.ndarray:
    """Coordinate matrix of the fixed embedding F_{p^a} -> F_{p^b}."""
    if src == dst:
        return np.eye(src.n, dtype=np.int64)
    if src.p != dst.p or dst.n % src.n:
        raise ValueError(f"no embedding {src!r} -> {dst!r}")
    if src.n == 1:
        m = np.zeros((dst.n, 1), dtype=np.int64)
        m[0, 0] = 1
        return m
    ratio = dst.n // src.n
    primes = sorted(_prime_factors_with_multiplicity(ratio))
    if len(primes) > 1:
        mid = field(src.p, src.n * primes[0])
        lower = _embedding_matrix(src, mid)
        upper = _embedding_matrix(mid, dst)
        return linalg.matmul(upper, lower, src.p)
    return _atomic_embedding(src, dst)


def _prime_factors_with_multiplicity(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _atomic_embedding(src: Field, dst: Field) -> np.ndarray:
    """Single-hop embedding: send the source generator to the least root of
    the source modulus inside dst."""
    from . import poly

    mod = poly.Polynomial(field(src.p, 1), list(src.modulus))
    roots = poly.roots_of_irreducible(mod, dst)
    if not roots:
        raise AssertionError("modulus has no root in the target field")
    rho = min(roots, key=lambda r: r.sort_key())
    cols = []
    acc = dst.one()
    for _ in range(src.n):
        cols.append(acc.coords)
        acc = acc * rho
    return np.array(cols, dtype=np.int64).T % src.p


def embed(x: FieldElement, target: Field) -> FieldElement:
    """Image of x under the fixed embedding into `target`."""
    if x.field == target:
        return x
    m = _embedding_matrix(x.field, target)
    v = (m @ np.array(x.coords, dtype=np.int64)) % target.p
    return FieldElement(target, tuple(int(c) for c in v))


def common_field(*elements: FieldElement):
    """Embed all arguments into F_{p^lcm}; returns (field, embedded tuple)."""
    import math

    p = elements[0].field.p
    n = 1
    for e in elements:
        if e.field.p != p:
            raise ValueError("mixed characteristics")
        n = n * e.field.n // math.gcd(n, e.field.n)
    tgt = field(p, n)
    return tgt, tuple(embed(e, tgt) for e in elements)


# -- k-th roots -----------------------------------------------------------------

def _factorize_small(n: int) -> dict[int, int]:
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def element_of_order(fld: Field, d: int) -> FieldElement:
    """A deterministic element of exact multiplicative order d (d | q - 1)."""
    q1 = fld.order - 1
    if q1 % d:
        raise ValueError(f"{d} does not divide the group order {q1}")
    primes = list(_factorize_small(d))
    for w in fld.elements():
        if w.is_zero():
            continue
        z = w ** (q1 // d)
        if all((z ** (d // ell)) != fld.one() for ell in primes):
            return z
    raise AssertionError("no element of the requested order (impossible)")


def _lth_root_in_field(c: FieldElement, ell: int):
    """All ell-th roots of an ell-th power c (ell prime dividing q - 1).

    Discrete-log-free Tonelli-Shanks style extraction in the ell-Sylow part.
    """
    fld = c.field
    one = fld.one()
    q1 = fld.order - 1
    s, t = 0, q1
    while t % ell == 0:
        s += 1
        t //= ell
    alpha = pow(ell, -1, t) if t > 1 else 0
    x0 = c ** alpha
    z = (x0 ** ell) / c
    # generator of the ell-Sylow subgroup
    xi = None
    for w in fld.elements():
        if w.is_zero():
            continue
        u = w ** t
        if s and (u ** (ell ** (s - 1))) != one:
            xi = u
            break
    if z != one:
        if xi is None:
            raise AssertionError("nontrivial Sylow element required but absent")
        # digits of log_xi(z) base ell, then divide the log by ell
        y = 0
        zz = z
        table = {}
        base = xi ** (ell ** (s - 1))
        acc = one
        for j in range(ell):
            table[acc] = j
            acc = acc * base
        for i in range(s):
            probe = zz ** (ell ** (s - 1 - i))
            digit = table.get(probe)
            if digit is None:
                raise AssertionError("element is outside the Sylow subgroup")
            y += digit * ell ** i
            zz = zz * (xi ** (-digit * ell ** i % (ell ** s)))
        if y % ell:
            raise AssertionError("input was not an ell-th power")
        x0 = x0 * (xi ** ((-(y // ell)) % (ell ** (s - 1)) if s > 1 else 0))
    if s == 0:
        return [x0]
    zeta = xi ** (ell ** (s - 1))
    roots = []
    cur = x0
    for _ in range(ell):
        roots.append(cur)
        cur = cur * zeta
    return roots


def element_kth_root(c: FieldElement, k: int):
    """The least k-th root of c within its own field, or None if there is none."""
    import math

    fld = c.field
    if c.is_zero():
        return fld.zero()
    q1 = fld.order - 1
    k1 = k % q1
    if k1 == 0:
        if c == fld.one():
            return min((x for x in fld.elements() if not x.is_zero()),
                       key=lambda r: r.sort_key())
        return None
    g = math.gcd(k1, q1)
    if (c ** (q1 // g)) != fld.one():
        return None
    k_cop = 1
    k_tor = 1
    for ell, e in _factorize_small(k1).items():
        if q1 % ell:
            k_cop *= ell ** e
        else:
            k_tor *= ell ** e
    x = c ** pow(k_cop, -1, q1) if k_cop > 1 else c
    remaining = k_tor
    for ell, e in _factorize_small(k_tor).items():
        for _ in range(e):
            remaining //= ell
            cands = _lth_root_in_field(x, ell)
            gg = math.gcd(remaining, q1)
            pick = None
            for y in cands:
                if (y ** (q1 // gg)) == fld.one():
                    pick = y
                    break
            if pick is None:
                raise AssertionError("no continuable root among the candidates")
            x = pick
    zeta = element_of_order(fld, g) if g > 1 else fld.one()
    best = x
    cur = x
    for _ in range(g - 1):
        cur = cur * zeta
        if cur.sort_key() < best.sort_key():
            best = cur
    return best


def kth_root(x: FieldElement, k: int, max_steps: int = 256):
    """A k-th root of x in the smallest extension of x's field containing one.

    Returns (root, field); the root is the least one under coordinate order.
    For x = 0 returns 0 in the base field.  The minimal extension degree is
    found by pure integer arithmetic (x lives in F_q, so solvability over
    F_{q^j} is an exponent identity inside F_q); only the winning extension
    is ever constructed.
    """
    import math

    if k < 1:
        raise ValueError("k must be positive")
    if x.is_zero():
        return x, x.field
    f0 = x.field
    q = f0.order
    for j in range(1, max_steps + 1):
        qj1 = q ** j - 1
        g = math.gcd(k, qj1)
        expo = (qj1 // g) % (q - 1) if q > 2 else 0
        if (x ** expo) == f0.one():
            fj = field(f0.p, f0.n * j)
            root = element_kth_root(embed(x, fj), k)
            if root is None:
                raise AssertionError("solvability test passed but extraction failed")
            return root, fj
    raise ArithmeticError(f"no {k}-th root found within degree {max_steps} extensions")
