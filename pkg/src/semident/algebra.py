"""Exact sparse multivariate polynomials and rational functions.

Indeterminates are covariance entries s(i, j) with i <= j and edge
coefficients l(i, j).  Coefficients are arbitrary-precision rationals;
floats appear only when evaluating at a numeric assignment.  All values
are immutable and the operations are pure.
"""

from __future__ import annotations

from fractions import Fraction
from math import fsum, gcd, lcm
from typing import Iterable, Mapping, NamedTuple, Sequence

__all__ = [
    "TERM_CAP",
    "Indeterminate",
    "Poly",
    "RatFn",
    "SingularMatrixError",
    "TermCapError",
    "canonicalize_constraint",
    "divexact",
    "gauss_solve_ratfn",
    "lambda_var",
    "sigma_poly",
    "sigma_var",
]

# Hard ceiling on stored terms per polynomial; symbolic expression swell
# is factorial in the worst case, so refuse early instead of thrashing.
TERM_CAP = 10**6


class TermCapError(RuntimeError):
    """A symbolic result would exceed TERM_CAP terms."""


class SingularMatrixError(ValueError):
    """The coefficient matrix is singular as a symbolic object."""


class Indeterminate(NamedTuple):
    kind: str  # "l" (edge coefficient) or "s" (covariance entry)
    i: int
    j: int

    def __str__(self) -> str:
        return f"{self.kind}_{self.i}_{self.j}"


def sigma_var(i: int, j: int) -> Indeterminate:
    """Covariance indeterminate, canonicalized to i <= j."""
    return Indeterminate("s", min(i, j), max(i, j))


def lambda_var(i: int, j: int) -> Indeterminate:
    """Edge coefficient indeterminate for i -> j; order is kept."""
    return Indeterminate("l", i, j)


# A monomial is a tuple of (indeterminate, positive exponent) pairs,
# sorted by indeterminate.  Indeterminates order as ("l"|"s", i, j), so
# lambda variables sort before sigma variables.
Monomial = tuple[tuple[Indeterminate, int], ...]

_EMPTY: Monomial = ()


def _mul_monomials(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    ia = ib = 0
    while ia < len(a) and ib < len(b):
        va, ea = a[ia]
        vb, eb = b[ib]
        if va == vb:
            out.append((va, ea + eb))
            ia += 1
            ib += 1
        elif va < vb:
            out.append(a[ia])
            ia += 1
        else:
            out.append(b[ib])
            ib += 1
    out.extend(a[ia:])
    out.extend(b[ib:])
    return tuple(out)


def _cmp_monomials(a: Monomial, b: Monomial) -> int:
    """Lexicographic order on exponent vectors, variables ascending.

    The monomial with the larger exponent at the first differing
    variable is greater; a variable missing from a monomial counts as
    exponent zero.
    """
    ia = ib = 0
    while ia < len(a) and ib < len(b):
        va, ea = a[ia]
        vb, eb = b[ib]
        if va == vb:
            if ea != eb:
                return 1 if ea > eb else -1
            ia += 1
            ib += 1
        elif va < vb:
            return 1
        else:
            return -1
    if ia < len(a):
        return 1
    if ib < len(b):
        return -1
    return 0


def _div_monomials(a: Monomial, b: Monomial) -> Monomial | None:
    """a / b, or None when some exponent would go negative."""
    out = []
    ia = ib = 0
    while ib < len(b):
        if ia >= len(a):
            return None
        va, ea = a[ia]
        vb, eb = b[ib]
        if va == vb:
            if ea < eb:
                return None
            if ea > eb:
                out.append((va, ea - eb))
            ia += 1
            ib += 1
        elif va < vb:
            out.append(a[ia])
            ia += 1
        else:
            return None
    out.extend(a[ia:])
    return tuple(out)


def _max_monomial(terms) -> Monomial:
    best = None
    for m in terms:
        if best is None or _cmp_monomials(m, best) > 0:
            best = m
    return best


class Poly:
    """Sparse multivariate polynomial with exact rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                q = Fraction(coeff)
                if q:
                    clean[mono] = q
        if len(clean) > TERM_CAP:
            raise TermCapError(f"polynomial with {len(clean)} terms exceeds "
                               f"the cap of {TERM_CAP}")
        self.terms = clean

    @classmethod
    def _make(cls, terms: dict[Monomial, Fraction]) -> "Poly":
        # internal: terms already clean, skip revalidation
        p = object.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def zero(cls) -> "Poly":
        return cls._make({})

    @classmethod
    def one(cls) -> "Poly":
        return cls.constant(1)

    @classmethod
    def constant(cls, c) -> "Poly":
        q = Fraction(c)
        return cls._make({_EMPTY: q} if q else {})

    @classmethod
    def variable(cls, var: Indeterminate, exp: int = 1) -> "Poly":
        if exp < 0:
            raise ValueError("exponent must be nonnegative")
        if exp == 0:
            return cls.one()
        return cls._make({((var, exp),): Fraction(1)})

    @classmethod
    def from_terms(cls, entries: Iterable[tuple[object, Sequence[tuple[Indeterminate, int]]]]) -> "Poly":
        """Build from (coefficient, [(var, exp), ..]) entries."""
        total: dict[Monomial, Fraction] = {}
        for coeff, powers in entries:
            mono = tuple(sorted((v, e) for v, e in powers if e))
            total[mono] = total.get(mono, Fraction(0)) + Fraction(coeff)
        return cls(total)

    # -- properties ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def variables(self) -> set[Indeterminate]:
        return {v for mono in self.terms for v, _ in mono}

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return _max_monomial(self.terms)

    def content(self) -> Fraction:
        """Positive rational c such that self / c has coprime integer
        coefficients."""
        if not self.terms:
            raise ValueError("zero polynomial has no content")
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, abs(c.numerator))
            den = lcm(den, c.denominator)
        return Fraction(num, den)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        big, small = (self.terms, other.terms)
        if len(big) < len(small):
            big, small = small, big
        out = dict(big)
        for mono, coeff in small.items():
            acc = out.get(mono)
            if acc is None:
                out[mono] = coeff
            else:
                acc = acc + coeff
                if acc:
                    out[mono] = acc
                else:
                    del out[mono]
        if len(out) > TERM_CAP:
            raise TermCapError(f"sum has {len(out)} terms, cap is {TERM_CAP}")
        return Poly._make(out)

    def __neg__(self) -> "Poly":
        return Poly._make({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        if not self.terms or not other.terms:
            return Poly.zero()
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[Monomial, Fraction] = {}
        for mb, cb in b.items():
            for ma, ca in a.items():
                mono = _mul_monomials(ma, mb)
                coeff = ca * cb
                acc = out.get(mono)
                if acc is None:
                    out[mono] = coeff
                else:
                    acc = acc + coeff
                    if acc:
                        out[mono] = acc
                    else:
                        del out[mono]
            if len(out) > TERM_CAP:
                raise TermCapError(
                    f"product has more than {TERM_CAP} terms")
        return Poly._make(out)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        q = Fraction(c)
        if not q:
            return Poly.zero()
        return Poly._make({m: coeff * q for m, coeff in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- evaluation and rendering ---------------------------------------------

    def evaluate(self, assignment: Mapping[Indeterminate, float]) -> float:
        """Numeric value; compensated summation over the term values."""
        return fsum(self._term_values(assignment))

    def evaluate_scaled(self, assignment: Mapping[Indeterminate, float]) -> tuple[float, float]:
        """(value, sum of absolute term values)."""
        vals = list(self._term_values(assignment))
        return fsum(vals), fsum(abs(v) for v in vals)

    def _term_values(self, assignment):
        for mono, coeff in self.terms.items():
            val = float(coeff)
            for var, exp in mono:
                try:
                    x = assignment[var]
                except KeyError:
                    raise ValueError(f"no value assigned to {var}") from None
                val *= x ** exp
            yield val

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in descending canonical monomial order."""
        import functools
        return sorted(self.terms.items(),
                      key=functools.cmp_to_key(
                          lambda a, b: _cmp_monomials(a[0], b[0])),
                      reverse=True)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for mono, coeff in self.sorted_terms():
            factors = [str(var) if exp == 1 else f"{var}^{exp}"
                       for var, exp in mono]
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(parts)

    def to_json(self) -> list[dict]:
        """Structured form: one {coeff, monomial} entry per term."""
        return [{"coeff": str(coeff),
                 "monomial": [[var.kind, var.i, var.j, exp]
                              for var, exp in mono]}
                for mono, coeff in self.sorted_terms()]

    def __repr__(self) -> str:
        return f"Poly({self.render()})"


def sigma_poly(i: int, j: int) -> Poly:
    return Poly.variable(sigma_var(i, j))


def canonicalize_constraint(p: Poly) -> Poly:
    """Canonical representative of p up to nonzero rational scaling.

    Divides by the content and fixes the sign so the coefficient of the
    lexicographically greatest monomial is positive.  Only covariance
    indeterminates are allowed.
    """
    if p.is_zero:
        raise ValueError("cannot canonicalize the zero polynomial")
    bad = [v for v in p.variables() if v.kind != "s"]
    if bad:
        raise ValueError(f"constraint contains non-covariance variables: {bad}")
    q = p.scale(1 / p.content())
    if q.terms[q.leading_monomial()] < 0:
        q = -q
    return q


def divexact(dividend: Poly, divisor: Poly) -> Poly:
    """Exact polynomial division; raises ArithmeticError if not exact."""
    if divisor.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    if dividend.is_zero:
        return Poly.zero()
    lead_d = divisor.leading_monomial()
    lead_d_coeff = divisor.terms[lead_d]
    rem = dict(dividend.terms)
    out: dict[Monomial, Fraction] = {}
    while rem:
        lead = _max_monomial(rem)
        q_mono = _div_monomials(lead, lead_d)
        if q_mono is None:
            raise ArithmeticError("polynomial division is not exact")
        q_coeff = rem[lead] / lead_d_coeff
        out[q_mono] = q_coeff
        for mono, coeff in divisor.terms.items():
            mm = _mul_monomials(q_mono, mono)
            acc = rem.get(mm, Fraction(0)) - q_coeff * coeff
            if acc:
                rem[mm] = acc
            elif mm in rem:
                del rem[mm]
    return Poly._make(out)


def _try_divexact(dividend: Poly, divisor: Poly) -> Poly | None:
    """divexact, or None when the division is not exact."""
    try:
        return divexact(dividend, divisor)
    except ArithmeticError:
        return None


class RatFn:
    """Quotient of polynomials; equality is by cross-multiplication, so
    no gcd reduction is ever performed.  The denominator is normalized
    to coprime integer coefficients with a positive leading one, which
    makes structurally equal denominators common and cheap to combine.
    Addition and division probe for one denominator dividing the other,
    which keeps the nested denominators produced by recursive
    substitution from snowballing.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = Poly.one()
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if num.is_zero:
            den = Poly.one()
        else:
            c = den.content()
            if den.terms[den.leading_monomial()] < 0:
                c = -c
            if c != 1:
                inv = 1 / c
                num = num.scale(inv)
                den = den.scale(inv)
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, p: Poly) -> "RatFn":
        return cls(p)

    @classmethod
    def zero(cls) -> "RatFn":
        return cls(Poly.zero())

    @classmethod
    def one(cls) -> "RatFn":
        return cls(Poly.one())

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __add__(self, other: "RatFn") -> "RatFn":
        if not isinstance(other, RatFn):
            return NotImplemented
        if self.den == other.den:
            return RatFn(self.num + other.num, self.den)
        q = _try_divexact(other.den, self.den)
        if q is not None:
            return RatFn(self.num * q + other.num, other.den)
        q = _try_divexact(self.den, other.den)
        if q is not None:
            return RatFn(self.num + other.num * q, self.den)
        return RatFn(self.num * other.den + other.num * self.den,
                     self.den * other.den)

    def __neg__(self) -> "RatFn":
        return RatFn(-self.num, self.den)

    def __sub__(self, other: "RatFn") -> "RatFn":
        return self + (-other)

    def __mul__(self, other: "RatFn") -> "RatFn":
        if not isinstance(other, RatFn):
            return NotImplemented
        return RatFn(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RatFn") -> "RatFn":
        if not isinstance(other, RatFn):
            return NotImplemented
        if other.num.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        if self.den == other.den:
            return RatFn(self.num, other.num)
        return RatFn(self.num * other.den, self.den * other.num)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatFn):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def evaluate(self, assignment: Mapping[Indeterminate, float]) -> float:
        den = self.den.evaluate(assignment)
        if den == 0.0:
            raise ZeroDivisionError("denominator vanishes at the assignment")
        return self.num.evaluate(assignment) / den

    def render(self) -> str:
        if self.den == Poly.one():
            return self.num.render()
        return f"({self.num.render()}) / ({self.den.render()})"

    def __repr__(self) -> str:
        return f"RatFn({self.render()})"


def _bareiss_det(rows: list[list[Poly]]) -> Poly:
    """Determinant by fraction-free elimination; consumes ``rows``.

    Pivots are the first symbolically nonzero entry of each column, and
    every interior division is exact.
    """
    k = len(rows)
    sign = 1
    prev = Poly.one()
    for col in range(k):
        piv = next((r for r in range(col, k) if not rows[r][col].is_zero), None)
        if piv is None:
            return Poly.zero()
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            sign = -sign
        pivot = rows[col][col]
        for r in range(col + 1, k):
            factor = rows[r][col]
            for c in range(col + 1, k):
                rows[r][c] = divexact(pivot * rows[r][c] - factor * rows[col][c],
                                      prev)
            rows[r][col] = Poly.zero()
        prev = pivot
    det = rows[k - 1][k - 1]
    return det if sign == 1 else -det


def _clear_row(entries: Sequence[RatFn]) -> list[Poly]:
    """Multiply a row by the least common product of its denominators
    that is detectable without a gcd: duplicates collapse and a
    denominator dividing another is dropped."""
    dens: list[Poly] = []
    for e in entries:
        if not any(e.den == d for d in dens):
            dens.append(e.den)
    kept = [d for i, d in enumerate(dens)
            if not any(i != j and _try_divexact(dens[j], d) is not None
                       for j in range(len(dens)))]
    product = Poly.one()
    for d in kept:
        product = product * d
    return [e.num * divexact(product, e.den) for e in entries]


def gauss_solve_ratfn(matrix: Sequence[Sequence[RatFn]],
                      rhs: Sequence[RatFn]) -> list[RatFn]:
    """Solve A x = b exactly over the rational function field.

    Rows are cleared of denominators, then each unknown is the ratio of
    two fraction-free Bareiss determinants (Cramer's rule), so no
    spurious polynomial factors accumulate across the solve chain.
    Raises SingularMatrixError when the determinant of A is the zero
    polynomial.
    """
    k = len(rhs)
    if k == 0:
        return []
    if len(matrix) != k or any(len(row) != k for row in matrix):
        raise ValueError("matrix shape does not match the right-hand side")
    cleared = [_clear_row(list(matrix[r]) + [rhs[r]]) for r in range(k)]
    det = _bareiss_det([row[:k] for row in cleared])
    if det.is_zero:
        raise SingularMatrixError("coefficient matrix is symbolically singular")
    out = []
    for i in range(k):
        replaced = [[row[k] if c == i else row[c] for c in range(k)]
                    for row in cleared]
        out.append(RatFn(_bareiss_det(replaced), det))
    return out
