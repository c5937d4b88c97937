"""Small parsers and reference data shared by the tests."""
import re

from clusterconf.symbolic import LaurentPolynomial

Y3 = ("y1", "y2", "y3")

_TERM = re.compile(r"^(?:(\d+)\*?)?((?:y\d+(?:\^\d+)?\*?)*)$")


def parse_poly(text: str, variables=Y3) -> LaurentPolynomial:
    """Parse sums like '1 + 2*y1*y2^2 + y3' (nonnegative coefficients only)."""
    terms = {}
    for raw in text.replace(" ", "").split("+"):
        m = _TERM.match(raw)
        if not m or not raw:
            raise ValueError(f"bad term {raw!r}")
        coef = int(m.group(1)) if m.group(1) else 1
        e = [0] * len(variables)
        for name, power in re.findall(r"(y\d+)(?:\^(\d+))?", m.group(2)):
            e[variables.index(name)] += int(power) if power else 1
        terms[tuple(e)] = terms.get(tuple(e), 0) + coef
    return LaurentPolynomial(variables, terms)


def parse_alphabet(text: str, f_by_label: dict, variables=Y3):
    """Expand CLI output like 'y1*F(3,2)^2/(F(1,1)*F(2,1))' into (num, den)."""
    if "/" in text:
        num_s, den_s = text.split("/", 1)
    else:
        num_s, den_s = text, "1"
    if den_s.startswith("("):
        den_s = den_s[1:-1]

    def side(s):
        out = LaurentPolynomial.constant(variables, 1)
        if s == "1":
            return out
        for factor in s.split("*"):
            base, _, power = factor.partition("^")
            k = int(power) if power else 1
            if base.startswith("y"):
                out = out * LaurentPolynomial.gen(variables, base) ** k
            else:
                out = out * f_by_label[base[1:]] ** k
        return out

    return side(num_s), side(den_s)


def fraction_of(parts, variables=Y3):
    """Product of polynomial strings, each optionally raised by '^k'."""
    out = LaurentPolynomial.constant(variables, 1)
    for item in parts:
        if isinstance(item, list):
            text, k = item
        else:
            text, k = item, 1
        out = out * parse_poly(text, variables) ** k
    return out
