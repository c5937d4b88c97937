"""Sparse multivariate Laurent polynomials with integer coefficients.

Everything downstream (cluster variables, F-polynomials, the rational
functions attached to u-variables) is built on the two classes here:

* :class:`LaurentPolynomial` -- immutable map from exponent tuples to ints.
* :class:`AlphabetMonomial` -- a Laurent monomial in the y-variables and in
  named factors (the F-polynomials), kept unexpanded until needed.
"""
from __future__ import annotations

import heapq
from operator import add, sub
from typing import Iterable, Mapping, Sequence


class NonExactDivision(ArithmeticError):
    """Raised when a quotient is not a Laurent polynomial."""


class NotInvertible(ArithmeticError):
    """Raised when evaluation hits a pole (negative power of a non-unit)."""


def _vadd(a, b):
    return tuple(map(add, a, b))


def _vsub(a, b):
    return tuple(map(sub, a, b))


class LaurentPolynomial:
    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, int] | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        if terms:
            for e, c in terms.items():
                if c:
                    e = tuple(e)
                    if len(e) != n:
                        raise ValueError(f"exponent {e} has wrong length for {n} variables")
                    clean[e] = int(c)
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, variables: Sequence[str], c: int) -> "LaurentPolynomial":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def monomial(cls, variables: Sequence[str], exponent: Sequence[int], c: int = 1) -> "LaurentPolynomial":
        return cls(variables, {tuple(exponent): c})

    @classmethod
    def gen(cls, variables: Sequence[str], name: str) -> "LaurentPolynomial":
        variables = tuple(variables)
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls(variables, {tuple(e): 1})

    @classmethod
    def _raw(cls, variables: tuple, terms: dict) -> "LaurentPolynomial":
        # trusted constructor: terms already clean
        p = object.__new__(cls)
        p.variables = variables
        p.terms = terms
        p._hash = None
        return p

    # -- basic queries ------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return len(self.terms) == 1 and self.terms.get((0,) * self.nvars) == 1

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def sorted_terms(self) -> list[tuple[tuple, int]]:
        """Terms in canonical (lexicographic ascending) order."""
        return sorted(self.terms.items())

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.nvars, 0)

    def min_exponents(self) -> tuple:
        if not self.terms:
            raise ValueError("zero polynomial has no exponents")
        return tuple(min(col) for col in zip(*self.terms))

    def max_exponents(self) -> tuple:
        if not self.terms:
            raise ValueError("zero polynomial has no exponents")
        return tuple(max(col) for col in zip(*self.terms))

    def _check(self, other: "LaurentPolynomial"):
        if self.variables != other.variables:
            raise ValueError(f"variable mismatch: {self.variables} vs {other.variables}")

    def _coerce(self, other):
        if isinstance(other, LaurentPolynomial):
            self._check(other)
            return other
        if isinstance(other, int):
            return LaurentPolynomial.constant(self.variables, other)
        return NotImplemented

    # -- ring operations ----------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPolynomial._raw(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(map(add, ea, eb))
                out[e] = get(e, 0) + ca * cb
        return LaurentPolynomial._raw(self.variables, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if self.is_monomial():
                (e, c), = self.terms.items()
                if c not in (1, -1):
                    raise NonExactDivision("inverse of a non-unit monomial")
                return LaurentPolynomial._raw(self.variables, {tuple(-x * (-k) for x in e): c ** (-k)})
            raise NonExactDivision("negative power of a non-monomial")
        result = LaurentPolynomial.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, exponent: Sequence[int], c: int = 1) -> "LaurentPolynomial":
        """Multiply by the monomial c * x^exponent."""
        exponent = tuple(exponent)
        return LaurentPolynomial._raw(
            self.variables, {_vadd(e, exponent): v * c for e, v in self.terms.items()}
        )

    def divide_exact(self, q: "LaurentPolynomial") -> "LaurentPolynomial":
        """Exact quotient self / q, or raise :class:`NonExactDivision`.

        Leading-term elimination in lexicographic order.  Exactness forces the
        quotient's exponents into the box [min(p)-min(q), max(p)-max(q)], so any
        step leaving that box proves a nonzero remainder and stops the loop.
        """
        self._check(q)
        if q.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return self
        if q.is_monomial():
            (eq, cq), = q.terms.items()
            out = {}
            for e, c in self.terms.items():
                v, r = divmod(c, cq)
                if r:
                    raise NonExactDivision("coefficient not divisible")
                out[_vsub(e, eq)] = v
            return LaurentPolynomial._raw(self.variables, out)

        lead_e = max(q.terms)
        lead_c = q.terms[lead_e]
        lo = _vsub(self.min_exponents(), q.min_exponents())
        hi = _vsub(self.max_exponents(), q.max_exponents())
        if any(a > b for a, b in zip(lo, hi)):
            raise NonExactDivision("Newton box of the quotient is empty")

        rem = dict(self.terms)
        heap = [tuple(-x for x in e) for e in rem]
        heapq.heapify(heap)
        quotient: dict = {}
        qterms = list(q.terms.items())
        while rem:
            key = heapq.heappop(heap)
            e = tuple(-x for x in key)
            c = rem.get(e)
            if not c:
                continue
            # stale duplicates of the same key are skipped by the rem check
            m = _vsub(e, lead_e)
            if any(x < a or x > b for x, a, b in zip(m, lo, hi)):
                raise NonExactDivision("remainder leaves the quotient's Newton box")
            k, r = divmod(c, lead_c)
            if r:
                raise NonExactDivision("leading coefficient does not divide")
            quotient[m] = k
            for eq_, cq in qterms:
                t = _vadd(m, eq_)
                v = rem.get(t, 0) - k * cq
                if v:
                    if t not in rem:
                        heapq.heappush(heap, tuple(-x for x in t))
                    rem[t] = v
                else:
                    rem.pop(t, None)
        return LaurentPolynomial._raw(self.variables, quotient)

    # -- evaluation / substitution -------------------------------------
    def evaluate(self, point: Sequence[int], modulus: int | None = None) -> int:
        """Evaluate at an integer point, over Z or over F_p when ``modulus`` is given."""
        point = list(point)
        if len(point) != self.nvars:
            raise ValueError("point has wrong dimension")
        if modulus is not None:
            point = [x % modulus for x in point]
        total = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k >= 0:
                    v *= pow(x, k, modulus) if modulus else x ** k
                else:
                    if modulus:
                        if x == 0:
                            raise NotInvertible("zero coordinate under a negative exponent")
                        v *= pow(pow(x, -1, modulus), -k, modulus)
                    else:
                        if x not in (1, -1):
                            raise NotInvertible(f"{x} is not a unit in the integers")
                        v *= x ** (-k)
            total += v
        return total % modulus if modulus else total

    def specialize(self, keep: Sequence[str]) -> "LaurentPolynomial":
        """Set every variable not in ``keep`` to 1 and drop it."""
        idx = [self.variables.index(v) for v in keep]
        out: dict = {}
        for e, c in self.terms.items():
            k = tuple(e[i] for i in idx)
            out[k] = out.get(k, 0) + c
        return LaurentPolynomial(keep, out)

    def embed(self, variables: Sequence[str]) -> "LaurentPolynomial":
        """Re-express over a larger (or reordered) variable list."""
        variables = tuple(variables)
        pos = [variables.index(v) for v in self.variables]
        n = len(variables)
        out = {}
        for e, c in self.terms.items():
            k = [0] * n
            for p, x in zip(pos, e):
                k[p] = x
            out[tuple(k)] = c
        return LaurentPolynomial._raw(variables, out)

    # -- comparison, hashing, printing ----------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial.constant(self.variables, other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    def key(self) -> tuple:
        """Canonical hashable/sortable form."""
        return tuple(self.sorted_terms())

    def __repr__(self):
        return f"LaurentPolynomial({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        # graded, then y1 before y2
        for e, c in sorted(self.terms.items(), key=lambda t: (sum(t[0]), [-x for x in t[0]])):
            mono = []
            for v, k in zip(self.variables, e):
                if k == 1:
                    mono.append(v)
                elif k:
                    mono.append(f"{v}^{k}")
            body = "*".join(mono)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "vars": list(self.variables),
            "terms": [{"e": list(e), "c": str(c)} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "LaurentPolynomial":
        return cls(doc["vars"], {tuple(t["e"]): int(t["c"]) for t in doc["terms"]})


def product(polys: Iterable[LaurentPolynomial], variables: Sequence[str]) -> LaurentPolynomial:
    out = LaurentPolynomial.constant(variables, 1)
    for p in polys:
        out = out * p
    return out


class AlphabetMonomial:
    """y^a * prod_gamma F_gamma^{k_gamma}, with the F's left symbolic."""

    __slots__ = ("y_exponents", "factor_exponents")

    def __init__(self, y_exponents: Sequence[int], factor_exponents: Mapping | None = None):
        self.y_exponents = tuple(int(a) for a in y_exponents)
        self.factor_exponents = {k: int(v) for k, v in (factor_exponents or {}).items() if v}

    @classmethod
    def one(cls, n: int) -> "AlphabetMonomial":
        return cls((0,) * n)

    def __mul__(self, other: "AlphabetMonomial") -> "AlphabetMonomial":
        fac = dict(self.factor_exponents)
        for k, v in other.factor_exponents.items():
            fac[k] = fac.get(k, 0) + v
        return AlphabetMonomial(_vadd(self.y_exponents, other.y_exponents), fac)

    def __pow__(self, k: int) -> "AlphabetMonomial":
        return AlphabetMonomial(
            tuple(a * k for a in self.y_exponents),
            {g: v * k for g, v in self.factor_exponents.items()},
        )

    def inverse(self) -> "AlphabetMonomial":
        return self ** -1

    def __eq__(self, other):
        if not isinstance(other, AlphabetMonomial):
            return NotImplemented
        return self.y_exponents == other.y_exponents and self.factor_exponents == other.factor_exponents

    def __hash__(self):
        return hash((self.y_exponents, frozenset(self.factor_exponents.items())))

    def __repr__(self):
        return f"AlphabetMonomial({self.y_exponents}, {dict(sorted(self.factor_exponents.items()))})"


def expand(m: AlphabetMonomial, table: Mapping, variables: Sequence[str]):
    """Expand ``m`` into (numerator, denominator) polynomials.

    Positive exponents go to the numerator, negative ones to the denominator.
    The F's have constant term 1, so no monomial factor is shared.
    """
    num_y = [max(a, 0) for a in m.y_exponents]
    den_y = [max(-a, 0) for a in m.y_exponents]
    num = LaurentPolynomial.monomial(variables, num_y)
    den = LaurentPolynomial.monomial(variables, den_y)
    for g in sorted(m.factor_exponents):
        k = m.factor_exponents[g]
        if k > 0:
            num = num * table[g] ** k
        else:
            den = den * table[g] ** (-k)
    return num, den
