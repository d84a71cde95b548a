"""Exact 2x2 complex matrix algebra for identity proofs.

Entries are :class:`Gaussian` numbers (rational real and imaginary parts)
in exact mode; ordinary Python complex numbers in floating mode.  Matrix
polynomials in commuting scalar indeterminates let expansions such as
(a0 p0 + a1 px + b)^2 be compared coefficient by coefficient.

The Pauli numbering follows the source convention, which differs from the
usual one: sigma1 is diagonal, sigma2 antidiagonal imaginary, sigma3
antidiagonal real.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np


@dataclass(frozen=True)
class Gaussian:
    """Exact complex number re + j*im with rational parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, value) -> "Gaussian":
        if isinstance(value, Gaussian):
            return value
        if isinstance(value, complex):
            re, im = Fraction(value.real), Fraction(value.imag)
            if re.denominator > 2 ** 20 or im.denominator > 2 ** 20:
                raise TypeError(f"{value!r} is not an exact Gaussian rational")
            return cls(re, im)
        return cls(Fraction(value), Fraction(0))

    @staticmethod
    def _exact(other):
        return isinstance(other, (Gaussian, int, Fraction)) and not isinstance(other, bool)

    def __add__(self, other):
        if self._exact(other):
            o = Gaussian.coerce(other)
            return Gaussian(self.re + o.re, self.im + o.im)
        if isinstance(other, (complex, float)):
            return complex(self) + other
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if self._exact(other):
            o = Gaussian.coerce(other)
            return Gaussian(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
        if isinstance(other, (complex, float)):
            return complex(self) * other
        return NotImplemented

    __rmul__ = __mul__

    def conjugate(self) -> "Gaussian":
        return Gaussian(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return abs(complex(self))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if self._exact(other):
            o = Gaussian.coerce(other)
            return self.re == o.re and self.im == o.im
        if isinstance(other, (complex, float)):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}j"
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}j)"


J = Gaussian(0, 1)
ONE = Gaussian(1, 0)
ZERO = Gaussian(0, 0)


@dataclass(frozen=True)
class ComplexMatrix2:
    """Row-major 2x2 matrix [[a, b], [c, d]]."""

    a: object
    b: object
    c: object
    d: object

    @classmethod
    def of(cls, rows, exact: bool = True) -> "ComplexMatrix2":
        (a, b), (c, d) = rows
        conv = Gaussian.coerce if exact else complex
        return cls(conv(a), conv(b), conv(c), conv(d))

    @classmethod
    def identity(cls, exact: bool = True) -> "ComplexMatrix2":
        return cls.of([[1, 0], [0, 1]], exact)

    @classmethod
    def zeros(cls, exact: bool = True) -> "ComplexMatrix2":
        return cls.of([[0, 0], [0, 0]], exact)

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    @property
    def exact(self) -> bool:
        return all(isinstance(e, Gaussian) for e in self.entries)

    def __matmul__(self, o: "ComplexMatrix2") -> "ComplexMatrix2":
        return ComplexMatrix2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __add__(self, o: "ComplexMatrix2") -> "ComplexMatrix2":
        return ComplexMatrix2(*(x + y for x, y in zip(self.entries, o.entries)))

    def __sub__(self, o: "ComplexMatrix2") -> "ComplexMatrix2":
        return ComplexMatrix2(*(x - y for x, y in zip(self.entries, o.entries)))

    def __neg__(self) -> "ComplexMatrix2":
        return ComplexMatrix2(*(-x for x in self.entries))

    def __mul__(self, scalar) -> "ComplexMatrix2":
        return ComplexMatrix2(*(scalar * x for x in self.entries))

    __rmul__ = __mul__

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def is_zero(self, tol: float = 0.0) -> bool:
        if tol == 0.0:
            return all(not x for x in self.entries)
        return all(abs(x) <= tol for x in self.entries)

    def max_abs(self) -> float:
        return max(abs(x) for x in self.entries)

    def to_numpy(self) -> np.ndarray:
        return np.array([[complex(self.a), complex(self.b)], [complex(self.c), complex(self.d)]])

    def to_floating(self) -> "ComplexMatrix2":
        return ComplexMatrix2(*(complex(x) for x in self.entries))

    def as_pairs(self):
        """[[re, im], ...] row-major, for JSON reports."""
        return [[[float(complex(x).real), float(complex(x).imag)] for x in row] for row in ((self.a, self.b), (self.c, self.d))]

    def __repr__(self):
        return f"[[{self.a!r}, {self.b!r}], [{self.c!r}, {self.d!r}]]"


def anticommutator(x: ComplexMatrix2, y: ComplexMatrix2) -> ComplexMatrix2:
    return x @ y + y @ x


_PAULI = {
    0: [[1, 0], [0, 1]],
    1: [[1, 0], [0, -1]],
    2: [[0, -J], [J, 0]],
    3: [[0, 1], [1, 0]],
}


def pauli(i: int, exact: bool = True) -> ComplexMatrix2:
    """sigma_i in the source numbering (sigma1 diagonal, sigma3 antidiagonal real)."""
    if i not in _PAULI:
        raise IndexError(f"Pauli index must be 0..3, got {i!r}")
    return ComplexMatrix2.of(_PAULI[i], exact)


@dataclass
class IdentityResult:
    name: str
    holds: bool
    residual: ComplexMatrix2 | None = None
    source: str = "stated"

    def to_dict(self) -> dict:
        out = {"name": self.name, "verdict": "pass" if self.holds else "fail", "source": self.source}
        if not self.holds and self.residual is not None:
            out["residual"] = self.residual.as_pairs()
        return out


def check_identity(name: str, lhs: ComplexMatrix2, rhs: ComplexMatrix2, source: str = "stated") -> IdentityResult:
    residual = lhs - rhs
    return IdentityResult(name, residual.is_zero(), residual, source)


@dataclass
class AlgebraReport:
    identities: list = field(default_factory=list)

    def by_source(self, source: str):
        return [r for r in self.identities if r.source == source]

    @property
    def all_hold(self) -> bool:
        return all(r.holds for r in self.identities)

    def __getitem__(self, name: str) -> IdentityResult:
        for r in self.identities:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"identities": [r.to_dict() for r in self.identities]}


def algebra_check() -> AlgebraReport:
    """Check the Pauli identities exactly.

    The cyclic products are checked twice: as stated (``+j``) and with the
    sign that actually holds for this numbering (``-j``), tagged by
    ``source``.  Squares, anticommutators and sigma0 products are
    convention-independent.
    """
    s = {i: pauli(i) for i in range(4)}
    eye = s[0]
    out = AlgebraReport()
    for i in (1, 2, 3):
        out.identities.append(check_identity(f"sigma{i}^2 = I", s[i] @ s[i], eye))
    for i, j, k in ((1, 2, 3), (3, 1, 2), (2, 3, 1)):
        out.identities.append(check_identity(f"sigma{i} sigma{j} = j sigma{k}", s[i] @ s[j], J * s[k]))
    for i, j in combinations((1, 2, 3), 2):
        out.identities.append(check_identity(f"sigma{i} sigma{j} = -sigma{j} sigma{i}", s[i] @ s[j], -(s[j] @ s[i])))
    for i in (1, 2, 3):
        out.identities.append(check_identity(f"sigma0 sigma{i} = sigma{i}", eye @ s[i], s[i], source="trivial"))
    for i, j, k in ((1, 2, 3), (3, 1, 2), (2, 3, 1)):
        out.identities.append(check_identity(f"sigma{i} sigma{j} = -j sigma{k}", s[i] @ s[j], -J * s[k], source="corrected"))
    return out


class MatrixPolynomial:
    """Polynomial in commuting scalar indeterminates with 2x2 matrix coefficients.

    Monomials are exponent tuples; coefficient order is preserved in
    products, which is where the non-commutativity lives.
    """

    def __init__(self, terms: dict | None = None, nvars: int = 2):
        self.nvars = nvars
        self.terms = {}
        for mono, coef in (terms or {}).items():
            if len(mono) != nvars:
                raise ValueError("monomial arity mismatch")
            if not coef.is_zero():
                self.terms[tuple(mono)] = coef

    @classmethod
    def linear(cls, coefficients, constant: ComplexMatrix2 | None = None) -> "MatrixPolynomial":
        """sum_i A_i x_i (+ B)."""
        n = len(coefficients)
        terms = {}
        for i, a in enumerate(coefficients):
            mono = tuple(1 if k == i else 0 for k in range(n))
            terms[mono] = a
        if constant is not None:
            terms[(0,) * n] = constant
        return cls(terms, n)

    def __mul__(self, other: "MatrixPolynomial") -> "MatrixPolynomial":
        out = {}
        for m1, a in self.terms.items():
            for m2, b in other.terms.items():
                mono = tuple(x + y for x, y in zip(m1, m2))
                prod = a @ b
                out[mono] = out[mono] + prod if mono in out else prod
        return MatrixPolynomial(out, self.nvars)

    def __sub__(self, other: "MatrixPolynomial") -> "MatrixPolynomial":
        out = dict(self.terms)
        for mono, coef in other.terms.items():
            out[mono] = out[mono] - coef if mono in out else -coef
        return MatrixPolynomial(out, self.nvars)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, MatrixPolynomial):
            return NotImplemented
        return (self - other).is_zero()

    def __repr__(self):
        return f"MatrixPolynomial({self.terms!r})"


def scalar_square_sum(nvars: int, constant: bool) -> MatrixPolynomial:
    """(x_0^2 + ... + x_{n-1}^2 [+ 1]) * I."""
    eye = ComplexMatrix2.identity()
    terms = {tuple(2 if k == i else 0 for k in range(nvars)): eye for i in range(nvars)}
    if constant:
        terms[(0,) * nvars] = eye
    return MatrixPolynomial(terms, nvars)
