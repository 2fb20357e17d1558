"""Irreducible unitary representations of the motion group O(n) x R^n.

Two kinds occur: extensions ``TauTilde(tau)`` of irreducibles of K = O(n)
(trivial on translations), and induced representations ``PiSigmaR(sigma, nu)``
attached to an irreducible sigma of the stabilizer O(n-1) and a squared radius
nu > 0. Radii are kept squared and rational; the associated Laplace eigenvalue
is 4 pi^2 nu.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import orthogonal as od
from .orthogonal import OIrrep
from .rational import format_rational, parse_rational


@dataclass(frozen=True)
class TauTilde:
    tau: OIrrep

    def sort_key(self) -> tuple:
        return (0, Fraction(0), self.tau.sort_key())

    def __str__(self) -> str:
        return f"tilde {self.tau}"

    def to_json(self) -> dict:
        return {"type": "tau", "tau": self.tau.to_json()}


@dataclass(frozen=True)
class PiSigmaR:
    sigma: OIrrep
    nu: Fraction

    def __post_init__(self):
        object.__setattr__(self, "nu", Fraction(self.nu))
        if self.nu <= 0:
            raise ValueError("squared radius must be positive")

    def sort_key(self) -> tuple:
        return (1, self.nu, self.sigma.sort_key())

    def __str__(self) -> str:
        return f"pi[{self.sigma}, nu={self.nu}]"

    def to_json(self) -> dict:
        return {"type": "pi", "sigma": self.sigma.to_json(), "nu": format_rational(self.nu)}


MotionRep = TauTilde | PiSigmaR


def from_json(data: dict) -> MotionRep:
    if data["type"] == "tau":
        return TauTilde(OIrrep.from_json(data["tau"]))
    if data["type"] == "pi":
        return PiSigmaR(OIrrep.from_json(data["sigma"]), parse_rational(data["nu"]))
    raise ValueError(f"unknown representation type {data['type']!r}")


def casimir_scalar(pi: MotionRep) -> Fraction:
    """Scalar of C = sum e_i^2 on pi, in units of 4 pi^2."""
    if isinstance(pi, TauTilde):
        return Fraction(0)
    return -pi.nu


def laplace_eigenvalue(pi: MotionRep) -> Fraction:
    """Eigenvalue of the bundle Laplacian attached to pi, in units of 4 pi^2."""
    return -casimir_scalar(pi)


@dataclass(frozen=True)
class Support:
    """The representations pi with [tau : pi|K] > 0: tau-tilde and whole families pi_{sigma, *}."""
    tau: OIrrep
    sigmas: tuple[OIrrep, ...]

    def contains(self, pi: MotionRep) -> bool:
        if isinstance(pi, TauTilde):
            return pi.tau == self.tau
        return pi.sigma in self.sigmas

    def __len__(self) -> int:
        return len(self.sigmas) + 1


def ghat_tau(tau: OIrrep, convention: str = "A") -> Support:
    """Support of tau in the unitary dual.

    By Frobenius reciprocity [tau : pi_{sigma,r}|K] = [sigma : tau|stabilizer],
    computed with the stabilizer of a vector, so every family occurs once.
    """
    sigmas = od.branch(tau, "standard", convention) if tau.n >= 2 else []
    return Support(tau, tuple(sigmas))
