"""Finite fields ``F_{q^m}`` with Frobenius twists and additive equations.

An ambient field is fixed once per computation by a :class:`FieldCtx`.
Elements are stored as integers whose base-``p`` digits are the coordinates in
the power basis of the defining modulus (digit ``i`` is the coefficient of
``X**i``).  Small fields get exp/log tables; larger ones fall back to
polynomial arithmetic.
"""
from __future__ import annotations

from functools import lru_cache
from math import gcd

__all__ = [
    "FieldCtx", "FFElem", "NoSolutionInField", "CtxMismatch",
    "get_field", "prime_power", "solve_additive", "embed", "escalation_degrees", "fq_rank",
]

_TABLE_LIMIT = 1 << 17


class NoSolutionInField(ArithmeticError):
    """The right-hand side is outside the image inside the ambient field."""


class CtxMismatch(ValueError):
    """Operands live in different ambient fields."""


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e`` and ``p`` prime."""
    if q < 2:
        raise ValueError("q must be at least 2")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, e


# ---------------------------------------------------------------------------
# polynomials over F_p as coefficient lists, lowest degree first

def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, f, p):
    a = list(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    while len(_ptrim(a)) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
    return a


def _pmulmod(a, b, f, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pmod(out, f, p)


def _ppowmod(a, n, f, p):
    result, base = [1], _pmod(a, f, p)
    while n:
        if n & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        n >>= 1
    return result


def _pgcd(a, b, p):
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _is_irreducible(f, p) -> bool:
    """Rabin's test for a monic polynomial ``f`` over ``F_p``."""
    d = len(f) - 1
    if d == 1:
        return True
    x = [0, 1]
    if _ptrim(_psub(_ppowmod(x, p ** d, f, p), x, p)):
        return False
    for r in {r for r in range(2, d + 1) if d % r == 0 and all(r % s for s in range(2, r))}:
        h = _psub(_ppowmod(x, p ** (d // r), f, p), x, p)
        if len(_pgcd(f, h, p)) != 1:
            return False
    return True


def _psub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _ptrim([(x - y) % p for x, y in zip(a, b)])


@lru_cache(maxsize=None)
def _find_modulus(p: int, d: int) -> tuple[int, ...]:
    """First monic irreducible of degree ``d`` in a fixed enumeration order."""
    if d == 1:
        return (0, 1)
    for idx in range(p ** d):
        coeffs, r = [], idx
        for _ in range(d):
            r, c = divmod(r, p)
            coeffs.append(c)
        if coeffs[0] == 0:
            continue
        f = coeffs + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise RuntimeError("no irreducible polynomial found")  # pragma: no cover


# ---------------------------------------------------------------------------

class FieldCtx:
    """The ambient field ``F_{q^m}``, ``q = p**e``, of degree ``d = e*m`` over ``F_p``."""

    def __init__(self, p: int, e: int, m: int, modulus=None):
        if prime_power(p) != (p, 1):
            raise ValueError(f"{p} is not prime")
        if e < 1 or m < 1:
            raise ValueError("e and m must be positive")
        self.p, self.e, self.m = p, e, m
        self.q = p ** e
        self.d = e * m
        self.order = p ** self.d
        if modulus is None:
            modulus = _find_modulus(p, self.d)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != self.d + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree e*m")
        if not _is_irreducible(list(modulus), p):
            raise ValueError("modulus is not irreducible")
        self.modulus = modulus
        self._exp = self._log = None
        if self.order <= _TABLE_LIMIT:
            self._build_tables()
        self.zero = FFElem(self, 0)
        self.one = FFElem(self, 1)

    # -- encoding ---------------------------------------------------------
    def digits(self, v: int) -> list[int]:
        p, out = self.p, []
        for _ in range(self.d):
            v, c = divmod(v, p)
            out.append(c)
        return out

    def encode(self, digits) -> int:
        v = 0
        for c in reversed(list(digits)):
            v = v * self.p + (int(c) % self.p)
        return v

    # -- raw integer arithmetic ------------------------------------------
    def _add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if b == 0:
            return a
        if a == 0:
            return b
        return self.encode(x + y for x, y in zip(self.digits(a), self.digits(b)))

    def _neg(self, a: int) -> int:
        if self.p == 2 or a == 0:
            return a
        return self.encode(-x for x in self.digits(a))

    def _poly_mul(self, a: int, b: int) -> int:
        if self.p == 2:
            r = 0
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
            mod = self.encode(self.modulus)
            top = self.d
            for bit in range(r.bit_length() - 1, top - 1, -1):
                if (r >> bit) & 1:
                    r ^= mod << (bit - top)
            return r
        prod = _pmulmod(self.digits(a), self.digits(b), list(self.modulus), self.p)
        return self.encode(prod)

    def _build_tables(self):
        n = self.order - 1
        factors = [r for r in range(2, n + 1) if n % r == 0 and all(r % s for s in range(2, int(r ** 0.5) + 1))]
        for g in range(1, self.order):
            if all(self._poly_pow(g, n // r) != 1 for r in factors):
                break
        else:  # pragma: no cover
            raise RuntimeError("no primitive element")
        exp, log = [0] * (2 * n + 1), [0] * self.order
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self._poly_mul(x, g)
        for i in range(n, 2 * n + 1):
            exp[i] = exp[i - n]
        self._exp, self._log = exp, log

    def _poly_pow(self, a: int, k: int) -> int:
        r = 1
        while k:
            if k & 1:
                r = self._poly_mul(r, a)
            a = self._poly_mul(a, a)
            k >>= 1
        return r

    def _mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._poly_mul(a, b)

    def _pow(self, a: int, k: int) -> int:
        n = self.order - 1
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("zero has no inverse")
            return 0 if k else 1
        if self._exp is not None:
            return self._exp[(self._log[a] * k) % n]
        return self._poly_pow(a, k % n)

    # -- public helpers ----------------------------------------------------
    def __call__(self, value) -> "FFElem":
        if isinstance(value, FFElem):
            if value.ctx is not self:
                raise CtxMismatch("element from another field")
            return value
        if isinstance(value, int):
            return FFElem(self, value % self.p)
        return FFElem(self, self.encode(value))

    def from_int(self, v: int) -> "FFElem":
        """Element whose base-p digit expansion is ``v``."""
        if not 0 <= v < self.order:
            raise ValueError("index out of range")
        return FFElem(self, v)

    def primitive_element(self) -> "FFElem":
        """A generator of the multiplicative group."""
        n = self.order - 1
        factors = [r for r in range(2, n + 1) if n % r == 0 and all(r % s for s in range(2, int(r ** 0.5) + 1))]
        for g in range(1, self.order):
            if all(self._pow(g, n // r) != 1 for r in factors):
                return FFElem(self, g)
        raise RuntimeError("no primitive element")  # pragma: no cover

    def elements(self):
        return (FFElem(self, v) for v in range(self.order))

    def fq_elements(self):
        """Elements of the subfield ``F_q``."""
        return [x for x in self.elements() if x.frobenius() == x]

    def fq_basis(self) -> list["FFElem"]:
        """An ``F_p``-basis of the subfield ``F_q``."""
        basis, span = [], {0}
        for x in self.fq_elements():
            if x.v not in span:
                basis.append(x)
                span = {self._add(s, self._mul(c, x.v)) for s in span for c in range(self.p)}
        return basis

    def __repr__(self):
        return f"FieldCtx(p={self.p}, e={self.e}, m={self.m})"

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.p, self.e, self.m, self.modulus) == (
            other.p, other.e, other.m, other.modulus)

    def __hash__(self):
        return hash((self.p, self.e, self.m, self.modulus))


@lru_cache(maxsize=None)
def get_field(q: int, m: int) -> FieldCtx:
    """Shared ambient field ``F_{q^m}`` with the deterministic modulus."""
    p, e = prime_power(q)
    return FieldCtx(p, e, m)


class FFElem:
    __slots__ = ("ctx", "v")

    def __init__(self, ctx: FieldCtx, v: int):
        self.ctx = ctx
        self.v = v

    def _other(self, other) -> int:
        if isinstance(other, FFElem):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise CtxMismatch("elements from different fields")
            return other.v
        if isinstance(other, int):
            return other % self.ctx.p
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FFElem(self.ctx, self.ctx._add(self.v, o))

    __radd__ = __add__

    def __neg__(self):
        return FFElem(self.ctx, self.ctx._neg(self.v))

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FFElem(self.ctx, self.ctx._add(self.v, self.ctx._neg(o)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FFElem(self.ctx, self.ctx._mul(self.v, o))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return FFElem(self.ctx, self.ctx._pow(self.v, k))

    def inverse(self) -> "FFElem":
        if self.v == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FFElem(self.ctx, self.ctx._pow(self.v, -1))

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * FFElem(self.ctx, o).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        if isinstance(other, FFElem):
            return self.v == other.v and (self.ctx is other.ctx or self.ctx == other.ctx)
        if isinstance(other, int):
            return self.v == other % self.ctx.p
        return NotImplemented

    def __hash__(self):
        return hash(self.v)

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"FFElem({self.serialize()})"

    def is_zero(self) -> bool:
        return self.v == 0

    def frobenius(self, k: int = 1) -> "FFElem":
        """``x**(q**k)``; negative ``k`` applies the inverse twist."""
        ctx = self.ctx
        k %= ctx.m
        if k == 0 or self.v == 0:
            return self
        return FFElem(ctx, ctx._pow(self.v, ctx.q ** k))

    def inv_frobenius(self, k: int = 1) -> "FFElem":
        return self.frobenius(-k)

    def in_fq(self) -> bool:
        return self.frobenius() == self

    def coords(self) -> list[int]:
        return self.ctx.digits(self.v)

    def serialize(self) -> str:
        return ",".join(str(c) for c in self.coords())


# ---------------------------------------------------------------------------
# linear algebra over F_p on coordinate vectors

def _rref(rows, p, ncols):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    rows = [list(r) for r in rows]
    pivots, r = [], 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def solve_additive(coeffs: dict[int, FFElem], rhs: FFElem):
    """Solve ``sum_g c_g z**(q**g) == rhs`` inside the ambient field.

    Returns ``(particular, kernel_basis)``: the lexicographically smallest
    solution in field coordinates (coordinate 0 most significant) and an
    ``F_q``-basis of the kernel.  Raises :class:`NoSolutionInField` when
    ``rhs`` is not in the image.
    """
    coeffs = {g: c for g, c in coeffs.items() if not c.is_zero()}
    if not coeffs:
        raise ValueError("at least one nonzero coefficient is required")
    ctx = rhs.ctx
    p, d = ctx.p, ctx.d
    basis = [FFElem(ctx, p ** i) for i in range(d)]

    def apply(z):
        acc = ctx.zero
        for g, c in coeffs.items():
            acc = acc + c * z.frobenius(g)
        return acc

    images = [apply(b).coords() for b in basis]
    # augmented system: columns of the map are images; solve M z = rhs
    aug = [[images[j][i] for j in range(d)] + [rhs.coords()[i]] for i in range(d)]
    red, piv = _rref(aug, p, d + 1)
    if d in piv:
        raise NoSolutionInField("right-hand side not in the image")
    sol = [0] * d
    for row, c in zip(red, piv):
        sol[c] = row[d]

    # kernel over F_p from the homogeneous system
    free = [c for c in range(d) if c not in piv]
    kern = []
    for f in free:
        v = [0] * d
        v[f] = 1
        for row, c in zip(red, piv):
            v[c] = (-row[f]) % p
        kern.append(v)
    kred, kpiv = _rref(kern, p, d) if kern else ([], [])
    for row, c in zip(kred, kpiv):
        if sol[c]:
            f = sol[c]
            sol = [(x - f * y) % p for x, y in zip(sol, row)]
    particular = FFElem(ctx, ctx.encode(sol))
    kernel_fp = [FFElem(ctx, ctx.encode(r)) for r in kred]
    return particular, _fq_basis_from_fp(kernel_fp, ctx)


def _fq_basis_from_fp(vectors: list[FFElem], ctx: FieldCtx) -> list[FFElem]:
    """Turn an ``F_p``-basis of an ``F_q``-subspace into an ``F_q``-basis."""
    if ctx.e == 1:
        return vectors
    scalars = ctx.fq_basis()
    chosen, rows = [], []
    for v in vectors:
        trial = rows + [v.coords()]
        if len(_rref(trial, ctx.p, ctx.d)[1]) > len(rows):
            chosen.append(v)
            rows += [(s * v).coords() for s in scalars]
            rows = _rref(rows, ctx.p, ctx.d)[0]
    return chosen


def fp_rank(elements: list[FFElem]) -> int:
    if not elements:
        return 0
    ctx = elements[0].ctx
    return len(_rref([x.coords() for x in elements], ctx.p, ctx.d)[1])


def fq_rank(elements: list[FFElem]) -> int:
    """Dimension over ``F_q`` of the ``F_q``-span of ``elements``."""
    if not elements:
        return 0
    ctx = elements[0].ctx
    scalars = ctx.fq_basis()
    return fp_rank([s * x for x in elements for s in scalars]) // ctx.e


def escalation_degrees(m: int, cap: int) -> list[int]:
    """Ambient degrees tried after ``m``: lcm(m, k) for growing k, up to ``cap``."""
    out = []
    for k in range(2, cap + 1):
        cand = m * k // gcd(m, k)
        if cand <= cap and cand not in out and cand != m:
            out.append(cand)
    return sorted(out)


@lru_cache(maxsize=None)
def _embedding_images(small: FieldCtx, big: FieldCtx) -> tuple[int, ...]:
    """Images in ``big`` of the power basis ``1, g, ..., g**(d-1)`` of ``small``."""
    if small.p != big.p or big.d % small.d:
        raise CtxMismatch(f"{small} does not embed into {big}")
    if small.d == 1:
        return (1,)
    # the roots of small's modulus lie in the unique subgroup of order |small|-1
    h = big.primitive_element() ** ((big.order - 1) // (small.order - 1))
    y = big.one
    for _ in range(small.order - 1):
        val = big.zero
        for c in reversed(small.modulus):
            val = val * y + c
        if val.is_zero():
            powers, acc = [], big.one
            for _ in range(small.d):
                powers.append(acc.v)
                acc = acc * y
            return tuple(powers)
        y = y * h
    raise RuntimeError("modulus has no root in the larger field")  # pragma: no cover


def embed(x: FFElem, big: FieldCtx) -> FFElem:
    """Image of ``x`` under a fixed embedding of its field into ``big``."""
    if x.ctx == big:
        return FFElem(big, x.v)
    images = _embedding_images(x.ctx, big)
    acc = big.zero
    for c, im in zip(x.coords(), images):
        if c:
            acc = acc + FFElem(big, im) * c
    return acc
