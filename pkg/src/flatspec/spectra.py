"""Spectra of the bundle Laplacians Delta_tau on a compact flat manifold.

Eigenvalues are stored as exact rationals nu with lambda = 4 pi^2 nu. Two
independent computations are provided:

* :func:`tau_spectrum_oracle` works directly with Fourier modes. Over the
  coset representatives (B, a) of the group (a the affine translation),

      d(nu) = 1/|F| sum_(B,a) tr tau(B) sum_{u in dual lattice, |u|^2 = nu, Bu = u} exp(-2 pi i <u, a>).

  In lattice coordinates u = L^{-T} k, the condition Bu = u reads B^T k = k
  and the phase is k . a.

* :func:`tau_spectrum_from_multiplicities` sums the multiplicities of the
  induced representations pi_{sigma, nu} over the constituents sigma of tau
  restricted to the stabilizer of a vector.
"""
from __future__ import annotations

import csv
import io
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import lattice
from . import motion
from . import orthogonal as od
from .bieberbach import BieberbachGroup
from .characters import eigen_data_from_integer_matrix, memo_character
from .orthogonal import OIrrep
from .rational import common_denominator, format_rational, parse_rational

INTEGRALITY_TOL = 1e-6
FOUR_PI_SQ = 4 * math.pi ** 2


class NonIntegralMultiplicityError(ArithmeticError):
    pass


class CutoffError(ValueError):
    """A table was asked for something beyond its cutoffs."""


def eigenvalue(nu: Fraction) -> float:
    return FOUR_PI_SQ * float(nu)


@dataclass
class SpectrumTable:
    tau: OIrrep
    nu_max: Fraction
    entries: dict  # Fraction -> int; nonzero entries plus the nu = 0 row
    group: str = ""

    def __post_init__(self):
        self.nu_max = Fraction(self.nu_max)
        for nu, d in self.entries.items():
            if nu < 0 or nu > self.nu_max:
                raise CutoffError(f"entry nu={nu} outside [0, {self.nu_max}]")
            if d < 0:
                raise ValueError(f"negative multiplicity at nu={nu}")
        self.entries = {nu: int(d) for nu, d in sorted(self.entries.items()) if d or nu == 0}
        self.entries.setdefault(Fraction(0), 0)
        self.entries = dict(sorted(self.entries.items()))

    def __getitem__(self, nu) -> int:
        return self.entries.get(Fraction(nu), 0)

    def same_spectrum(self, other: "SpectrumTable") -> bool:
        return self.entries == other.entries

    def first_mismatch(self, other: "SpectrumTable"):
        """(nu, d_self, d_other) at the smallest differing nu, or None."""
        for nu in sorted(set(self.entries) | set(other.entries)):
            if self[nu] != other[nu]:
                return nu, self[nu], other[nu]
        return None

    def truncated(self, nu_max) -> "SpectrumTable":
        nu_max = Fraction(nu_max)
        if nu_max > self.nu_max:
            raise CutoffError(f"table only reaches nu={self.nu_max}")
        return SpectrumTable(self.tau, nu_max, {k: v for k, v in self.entries.items() if k <= nu_max},
                             self.group)

    def rows(self):
        for nu, d in self.entries.items():
            yield nu.numerator, nu.denominator, f"{eigenvalue(nu):.12g}", d

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["nu_num", "nu_den", "lambda_float", "multiplicity"])
        w.writerows(self.rows())
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "tau": self.tau.to_json(),
            "nu_max": format_rational(self.nu_max),
            "entries": [{"nu": format_rational(nu), "lambda": float(f"{eigenvalue(nu):.12g}"),
                         "multiplicity": d} for nu, d in self.entries.items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SpectrumTable":
        entries = {parse_rational(e["nu"]): int(e["multiplicity"]) for e in data["entries"]}
        return cls(OIrrep.from_json(data["tau"]), parse_rational(data["nu_max"]), entries,
                   data.get("group", ""))


@dataclass
class MultiplicityTable:
    """n(tau-tilde) for tau in the catalog, and n(pi_{sigma, nu}) for 0 < nu <= nu_max.

    Only nonzero continuous entries are stored. ``convention`` names the kappa
    convention of the sigma labels.
    """
    n: int
    weight_bound: int
    nu_max: Fraction
    zero_part: dict = field(default_factory=dict)  # OIrrep of O(n) -> int
    continuous_part: dict = field(default_factory=dict)  # (OIrrep of O(n-1), Fraction) -> int
    convention: str = "A"

    def __post_init__(self):
        self.nu_max = Fraction(self.nu_max)
        for key, v in list(self.zero_part.items()) + list(self.continuous_part.items()):
            if int(v) != v or v < 0:
                raise ValueError(f"multiplicity at {key} must be a nonnegative integer")
        for (_, nu), v in self.continuous_part.items():
            if v and not 0 < nu <= self.nu_max:
                raise ValueError(f"continuous entry at nu={nu} lies outside (0, {self.nu_max}]")
        self.continuous_part = {k: int(v) for k, v in self.continuous_part.items() if v}

    def zero(self, tau: OIrrep) -> int:
        if tau not in self.zero_part:
            raise CutoffError(f"{tau} is outside the table (weight bound {self.weight_bound})")
        return self.zero_part[tau]

    def continuous(self, sigma: OIrrep, nu) -> int:
        return self.continuous_part.get((sigma, Fraction(nu)), 0)

    def relabeled(self, convention: str) -> "MultiplicityTable":
        """Same table with sigma labels in ``convention``."""
        if convention == self.convention:
            return self
        cont = {(od.relabel(s, "B"), nu): v for (s, nu), v in self.continuous_part.items()}
        return MultiplicityTable(self.n, self.weight_bound, self.nu_max, dict(self.zero_part), cont,
                                 convention)

    def nus(self) -> list[Fraction]:
        return sorted({nu for _, nu in self.continuous_part})

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiplicityTable):
            return NotImplemented
        other = other.relabeled(self.convention)
        return (self.n, self.zero_part, self.continuous_part) == (other.n, other.zero_part,
                                                                   other.continuous_part)

    def to_json(self) -> dict:
        zero = [{"tau": t.to_json(), "multiplicity": v} for t, v in sorted(self.zero_part.items())]
        cont = [{"sigma": s.to_json(), "nu": format_rational(nu), "multiplicity": v}
                for (s, nu), v in sorted(self.continuous_part.items(),
                                         key=lambda kv: (kv[0][1], kv[0][0].sort_key()))]
        return {
            "n": self.n,
            "weight_bound": self.weight_bound,
            "nu_max": format_rational(self.nu_max),
            "convention": self.convention,
            "zero_part": zero,
            "continuous_part": cont,
        }

    @classmethod
    def from_json(cls, data: dict) -> "MultiplicityTable":
        zero = {OIrrep.from_json(e["tau"]): int(e["multiplicity"]) for e in data["zero_part"]}
        cont = {(OIrrep.from_json(e["sigma"]), parse_rational(e["nu"])): int(e["multiplicity"])
                for e in data["continuous_part"]}
        return cls(int(data["n"]), int(data["weight_bound"]), parse_rational(data["nu_max"]),
                   zero, cont, data.get("convention", "A"))


# -- oracle ---------------------------------------------------------------------

@dataclass(frozen=True)
class _PhaseData:
    """tau-independent part of the oracle: per coset, per shell, the summed phases."""
    values: tuple[Fraction, ...]
    shell_sizes: tuple[int, ...]
    eigen: tuple  # EigenData per coset
    phases: np.ndarray  # (cosets, shells) float


_cache: dict = {}
_cache_lock = threading.Lock()


def _phase_data(group: BieberbachGroup, nu_max: Fraction, backend: str | None, threads: int) -> _PhaseData:
    key = (group.canonical_key(), nu_max, backend or lattice.BACKEND)
    with _cache_lock:
        hit = _cache.get(key)
    if hit is not None:
        return hit
    shells = lattice.enumerate_shells(group.gram_inverse, nu_max, backend)
    rows, eigen = [], []
    for c in group.cosets:
        den = common_denominator(c.translation)
        anum = [int(x * den) for x in c.translation]
        bt = [list(col) for col in zip(*c.rotation)]
        counts = lattice.phase_counts(shells, bt, anum, den, backend, threads)
        cosines = np.cos(2 * np.pi * np.arange(den) / den)
        rows.append(counts @ cosines)
        eigen.append(eigen_data_from_integer_matrix(c.rotation))
    data = _PhaseData(shells.values, tuple(shells.shell_sizes()), tuple(eigen), np.array(rows))
    with _cache_lock:
        _cache[key] = data
    return data


def clear_cache():
    with _cache_lock:
        _cache.clear()


def _to_multiplicity(x: float, where: str) -> int:
    d = round(x)
    if abs(x - d) > INTEGRALITY_TOL or d < 0:
        raise NonIntegralMultiplicityError(f"multiplicity {x!r} at {where} is not a nonnegative integer")
    return int(d)


def tau_spectrum_oracle(group: BieberbachGroup, tau: OIrrep, nu_max, threads: int = 1,
                        backend: str | None = None) -> SpectrumTable:
    if tau.n != group.n:
        raise ValueError(f"{tau} is not a representation of O({group.n})")
    nu_max = parse_rational(nu_max) if isinstance(nu_max, str) else Fraction(nu_max)
    raw = oracle_values(group, tau, nu_max, threads, backend)
    entries = {nu: _to_multiplicity(x, f"nu={nu} for {tau} on {group.name or 'group'}")
               for nu, x in raw.items()}
    return SpectrumTable(tau, nu_max, entries, group.name)


def oracle_values(group: BieberbachGroup, tau: OIrrep, nu_max, threads: int = 1,
                  backend: str | None = None) -> dict:
    """Unrounded oracle multiplicities, one float per nonempty shell."""
    data = _phase_data(group, Fraction(nu_max), backend, threads)
    chars = np.array([memo_character(tau, e).real for e in data.eigen])
    totals = chars @ data.phases / group.order
    return {nu: float(x) for nu, x in zip(data.values, totals)}


def lattice_counts(group: BieberbachGroup, nu_max) -> dict:
    """#{u in dual lattice : |u|^2 = nu} for nu <= nu_max."""
    data = _phase_data(group, Fraction(nu_max), None, 1)
    return dict(zip(data.values, data.shell_sizes))


# -- multiplicity formula -------------------------------------------------------

def tau_spectrum_from_multiplicities(mult: MultiplicityTable, tau: OIrrep, nu_max=None) -> SpectrumTable:
    nu_max = mult.nu_max if nu_max is None else Fraction(nu_max)
    if nu_max > mult.nu_max:
        raise CutoffError(f"table only reaches nu={mult.nu_max}, asked for {nu_max}")
    if tau.n != mult.n:
        raise ValueError(f"{tau} is not a representation of O({mult.n})")
    entries = {Fraction(0): mult.zero(tau)}
    support = motion.ghat_tau(tau, mult.convention)
    for (sigma, nu), v in mult.continuous_part.items():
        if nu <= nu_max and sigma in support.sigmas:
            entries[nu] = entries.get(nu, 0) + v
    return SpectrumTable(tau, nu_max, entries)


@dataclass(frozen=True)
class IsospectralVerdict:
    tau: OIrrep
    nu_max: Fraction
    mismatch: tuple | None  # (nu, d1, d2)

    @property
    def equal(self) -> bool:
        return self.mismatch is None

    def to_json(self) -> dict:
        out = {"tau": self.tau.to_json(), "nu_max": format_rational(self.nu_max), "equal": self.equal}
        if self.mismatch:
            nu, d1, d2 = self.mismatch
            out["mismatch"] = {"nu": format_rational(nu), "d1": d1, "d2": d2}
        return out


def are_tau_isospectral(g1: BieberbachGroup, g2: BieberbachGroup, tau: OIrrep, nu_max,
                        threads: int = 1) -> IsospectralVerdict:
    if g1.n != g2.n:
        raise ValueError("groups act in different dimensions")
    s1 = tau_spectrum_oracle(g1, tau, nu_max, threads)
    s2 = tau_spectrum_oracle(g2, tau, nu_max, threads)
    return IsospectralVerdict(tau, s1.nu_max, s1.first_mismatch(s2))
