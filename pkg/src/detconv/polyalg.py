"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial of fixed arity ``k`` is a mapping from exponent vectors
(length-``k`` tuples of non-negative ints) to nonzero ``Fraction``
coefficients.  The zero polynomial is the empty mapping, so two
polynomials are equal exactly when their term mappings are equal and no
separate normalisation pass is ever needed.  Coefficient arithmetic
never leaves the rationals; floats are rejected so the core stays exact.

Values are immutable after construction and safe to share between
threads; every operation returns a new polynomial.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Scalar = Union[int, Fraction]
Exponents = tuple[int, ...]


def as_fraction(value: Scalar | str) -> Fraction:
    """Coerce an int, Fraction or 'num/den' string to a Fraction.

    Floats are refused: silently accepting them would smuggle rounding
    error into a library whose whole point is exactness.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def parse_rational(text: str) -> Fraction:
    """Parse a 'num/den' or plain integer decimal string."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a valid rational literal: {text!r}") from exc


def format_rational(value: Scalar) -> str:
    """Render a rational as 'num/den' (or 'num' when the denominator is 1)."""
    return str(as_fraction(value))


def exp_factorial(exps: Sequence[int]) -> int:
    """Product of the factorials of the entries of an exponent vector."""
    out = 1
    for e in exps:
        out *= math.factorial(e)
    return out


def monomial_key(item: tuple[Exponents, Fraction]) -> tuple[int, Exponents]:
    # graded lexicographic: total degree first, then the exponent tuple
    exps = item[0]
    return (sum(exps), exps)


class MultiPoly:
    """Sparse polynomial in a fixed number of variables.

    ``terms`` maps exponent tuples to nonzero Fractions.  Instances are
    treated as immutable; ``terms`` must not be mutated after
    construction.
    """

    __slots__ = ("arity", "terms", "_hash")

    def __init__(self, arity: int, terms: Mapping | Iterable | None = None):
        if not isinstance(arity, int) or arity < 0:
            raise ValueError(f"arity must be a non-negative int, got {arity!r}")
        clean: dict[Exponents, Fraction] = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for exps, coeff in items:
                exps = tuple(int(e) for e in exps)
                if len(exps) != arity:
                    raise ValueError(
                        f"exponent vector {exps} has length {len(exps)}, expected arity {arity}"
                    )
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                c = clean.get(exps, _ZERO) + as_fraction(coeff)
                if c:
                    clean[exps] = c
                else:
                    clean.pop(exps, None)
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, arity: int) -> "MultiPoly":
        return cls(arity)

    @classmethod
    def constant(cls, arity: int, value: Scalar | str) -> "MultiPoly":
        c = as_fraction(value)
        return cls(arity, {(0,) * arity: c} if c else {})

    @classmethod
    def variable(cls, arity: int, index: int) -> "MultiPoly":
        if not 0 <= index < arity:
            raise ValueError(f"variable index {index} out of range for arity {arity}")
        exps = tuple(1 if i == index else 0 for i in range(arity))
        return cls(arity, {exps: Fraction(1)})

    @classmethod
    def monomial(cls, arity: int, exps: Sequence[int], coeff: Scalar = 1) -> "MultiPoly":
        return cls(arity, {tuple(exps): as_fraction(coeff)})

    # -- inspection ---------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        if not self.is_constant:
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        """Coefficient of the given exponent vector (zero when absent)."""
        key = tuple(int(e) for e in exps)
        if len(key) != self.arity:
            raise ValueError(f"exponent vector length {len(key)} != arity {self.arity}")
        return self.terms.get(key, _ZERO)

    def total_degree(self) -> int:
        """Largest total degree among stored terms; 0 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=0)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        """True if every term has the same total degree (vacuously for 0)."""
        degrees = {sum(e) for e in self.terms}
        if not degrees:
            return True
        if degree is None:
            return len(degrees) == 1
        return degrees == {degree}

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        """Terms in descending graded-lexicographic order (canonical)."""
        return sorted(self.terms.items(), key=monomial_key, reverse=True)

    # -- arithmetic ---------------------------------------------------

    def _require_same_shape(self, other: "MultiPoly") -> None:
        if self.arity != other.arity:
            raise ValueError(f"arity mismatch: {self.arity} vs {other.arity}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(self.arity, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._require_same_shape(other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            s = out.get(exps, _ZERO) + c
            if s:
                out[exps] = s
            else:
                del out[exps]
        return _raw(self.arity, out)

    __radd__ = __add__

    def __neg__(self):
        return _raw(self.arity, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(self.arity, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = as_fraction(other)
            if not c:
                return MultiPoly.zero(self.arity)
            return _raw(self.arity, {e: v * c for e, v in self.terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._require_same_shape(other)
        out: dict[Exponents, Fraction] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                s = out.get(key, _ZERO) + ca * cb
                if s:
                    out[key] = s
                else:
                    del out[key]
        return _raw(self.arity, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a non-negative int")
        result = MultiPoly.constant(self.arity, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def __eq__(self, other):
        return (
            isinstance(other, MultiPoly)
            and self.arity == other.arity
            and self.terms == other.terms
        )

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.arity, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self):
        return bool(self.terms)

    # -- calculus and substitution ------------------------------------

    def partial_derivative(self, var: int, order: int = 1) -> "MultiPoly":
        """Exact formal partial derivative of the given order."""
        if not 0 <= var < self.arity:
            raise ValueError(f"variable index {var} out of range for arity {self.arity}")
        if order < 0:
            raise ValueError("derivative order must be non-negative")
        if order == 0:
            return self
        out: dict[Exponents, Fraction] = {}
        for exps, c in self.terms.items():
            e = exps[var]
            if e < order:
                continue
            factor = math.perm(e, order)  # e * (e-1) * ... * (e-order+1)
            key = exps[:var] + (e - order,) + exps[var + 1 :]
            s = out.get(key, _ZERO) + c * factor
            if s:
                out[key] = s
            else:
                del out[key]
        return _raw(self.arity, out)

    def substitute(
        self,
        assignment: Sequence["MultiPoly | Scalar"],
        arity: int | None = None,
    ) -> "MultiPoly":
        """Substitute one polynomial or rational per variable.

        Every polynomial in the assignment must share one target arity;
        scalars are promoted to constants.  Pass ``arity`` explicitly when
        the assignment contains no polynomials.
        """
        if len(assignment) != self.arity:
            raise ValueError(
                f"assignment length {len(assignment)} != arity {self.arity}"
            )
        target = arity
        for a in assignment:
            if isinstance(a, MultiPoly):
                if target is None:
                    target = a.arity
                elif a.arity != target:
                    raise ValueError(
                        f"assignment arity mismatch: {a.arity} vs {target}"
                    )
        if target is None:
            raise ValueError("target arity is undetermined; pass arity=")
        images = [
            a if isinstance(a, MultiPoly) else MultiPoly.constant(target, a)
            for a in assignment
        ]
        powers: list[dict[int, MultiPoly]] = [
            {0: MultiPoly.constant(target, 1)} for _ in range(self.arity)
        ]

        def power(i: int, e: int) -> MultiPoly:
            cache = powers[i]
            if e not in cache:
                cache[e] = power(i, e - 1) * images[i]
            return cache[e]

        result = MultiPoly.zero(target)
        for exps, c in self.terms.items():
            term = MultiPoly.constant(target, c)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def evaluate(self, values: Sequence[Scalar]) -> Fraction:
        """Exact value of the polynomial at a rational point."""
        if len(values) != self.arity:
            raise ValueError(f"expected {self.arity} values, got {len(values)}")
        vals = [as_fraction(v) for v in values]
        total = Fraction(0)
        for exps, c in self.terms.items():
            term = c
            for v, e in zip(vals, exps):
                if e:
                    term *= v**e
            total += term
        return total

    def append_variables(self, extra: int) -> "MultiPoly":
        """Same polynomial viewed in ``arity + extra`` variables."""
        if extra < 0:
            raise ValueError("extra must be non-negative")
        if extra == 0:
            return self
        pad = (0,) * extra
        return _raw(self.arity + extra, {e + pad: c for e, c in self.terms.items()})

    # -- serialization and display -------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "arity": self.arity,
            "terms": [
                {"exp": list(e), "coeff": format_rational(c)}
                for e, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "MultiPoly":
        if not isinstance(data, Mapping) or "arity" not in data:
            raise ValueError("polynomial JSON must be an object with an 'arity' field")
        terms = []
        for i, item in enumerate(data.get("terms", [])):
            if not isinstance(item, Mapping) or "exp" not in item or "coeff" not in item:
                raise ValueError(f"terms[{i}] must have 'exp' and 'coeff' fields")
            terms.append((tuple(item["exp"]), parse_rational(str(item["coeff"]))))
        return cls(int(data["arity"]), terms)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({self.arity}, {dict(self.sorted_terms())!r})"


_ZERO = Fraction(0)


def _raw(arity: int, terms: dict[Exponents, Fraction]) -> MultiPoly:
    # internal fast path: terms already canonical (no zeros, right lengths)
    p = MultiPoly.__new__(MultiPoly)
    object.__setattr__(p, "arity", arity)
    object.__setattr__(p, "terms", terms)
    object.__setattr__(p, "_hash", None)
    return p


def default_names(arity: int) -> tuple[str, ...]:
    if arity <= 3:
        return ("x", "y", "z")[:arity]
    return tuple(f"x{i + 1}" for i in range(arity))


def format_poly(p: MultiPoly, names: Sequence[str] | None = None) -> str:
    """Human-readable form, terms in graded-lex order."""
    if p.is_zero:
        return "0"
    names = tuple(names) if names is not None else default_names(p.arity)
    if len(names) != p.arity:
        raise ValueError("wrong number of variable names")
    parts: list[str] = []
    for exps, coeff in p.sorted_terms():
        factors = [
            names[i] if e == 1 else f"{names[i]}^{e}"
            for i, e in enumerate(exps)
            if e
        ]
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


# Thin functional aliases for the core operations, matching the library's
# documented surface.

def poly_mul(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Exact product of two polynomials of equal arity."""
    if not isinstance(p, MultiPoly) or not isinstance(q, MultiPoly):
        raise TypeError("poly_mul expects MultiPoly operands")
    return p * q


def coefficient_of(p: MultiPoly, exps: Sequence[int]) -> Fraction:
    """Coefficient of the monomial with the given exponent vector."""
    return p.coefficient(exps)


def partial_derivative(p: MultiPoly, var: int, order: int = 1) -> MultiPoly:
    """Formal partial derivative (exact, no rounding)."""
    return p.partial_derivative(var, order)


def poly_substitute(
    p: MultiPoly, assignment: Sequence[MultiPoly | Scalar], arity: int | None = None
) -> MultiPoly:
    """Compose ``p`` with one polynomial or rational per variable."""
    return p.substitute(assignment, arity=arity)
