"""Recover regular-representation multiplicities from tau-spectra.

The spectrum of Delta_tau at nu > 0 is the sum of n(pi_{sigma, nu}) over the
constituents sigma of tau restricted to O(n-1). Lifting a weight mu0 of
O(n-1) to the weight of O(n) with the same coordinates gives a tau whose
restriction contains sigma_{mu0, kappa} once, next to partners whose weights
are componentwise smaller. Walking the weights of O(n-1) in
:func:`~flatspec.weights.processing_key` order, those partners are always
known, so each multiplicity is a spectrum value minus already recovered ones.
"""
from __future__ import annotations

import abc
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import motion
from . import orthogonal as od
from .bieberbach import BieberbachGroup, FamilyDescriptor, diagonal_family
from .motion import PiSigmaR, TauTilde
from .orthogonal import OIrrep
from .rational import format_rational
from .spectra import (CutoffError, IsospectralVerdict, MultiplicityTable, SpectrumTable,
                      tau_spectrum_from_multiplicities, tau_spectrum_oracle)
from .weights import EVEN, ODD, Weight, enumerate_weights


class ReconstructionError(ArithmeticError):
    pass


class NegativeMultiplicityError(ReconstructionError):
    def __init__(self, mu0: Weight, sigma: OIrrep, nu: Fraction, value: int):
        super().__init__(f"negative multiplicity {value} for {sigma} at nu={nu} (mu0={mu0})")
        self.mu0, self.sigma, self.nu, self.value = mu0, sigma, nu, value


class InconsistentSpectraError(ReconstructionError):
    pass


class ProviderGapError(LookupError):
    pass


# -- providers ------------------------------------------------------------------

class SpectraProvider(abc.ABC):
    """Source of tau-spectra for a fixed dimension n; must be pure."""

    n: int

    @abc.abstractmethod
    def spectrum(self, tau: OIrrep, nu_max: Fraction) -> SpectrumTable:
        ...


class OracleProvider(SpectraProvider):
    def __init__(self, group: BieberbachGroup, threads: int = 1, backend: str | None = None):
        self.group, self.n = group, group.n
        self.threads, self.backend = threads, backend

    def spectrum(self, tau, nu_max):
        return tau_spectrum_oracle(self.group, tau, nu_max, self.threads, self.backend)


class TableProvider(SpectraProvider):
    """Serves precomputed tables, e.g. synthetic spectra in tests."""

    def __init__(self, n: int, tables: dict):
        self.n, self.tables = n, dict(tables)

    @classmethod
    def from_multiplicities(cls, mult: MultiplicityTable) -> "TableProvider":
        taus = od.catalog(mult.n, mult.weight_bound)
        return cls(mult.n, {t: tau_spectrum_from_multiplicities(mult, t) for t in taus})

    def spectrum(self, tau, nu_max):
        table = self.tables.get(tau)
        if table is None:
            raise ProviderGapError(f"no spectrum for {tau}")
        return table.truncated(nu_max)


# -- reconstruction -------------------------------------------------------------

def zero_multiplicities(provider: SpectraProvider, weight_bound: int) -> dict:
    """n(tau-tilde) is the dimension of the kernel of Delta_tau."""
    return {tau: provider.spectrum(tau, Fraction(0))[0] for tau in od.catalog(provider.n, weight_bound)}


def stabilizer_weights(n: int, weight_bound: int) -> list[Weight]:
    """Normalized weights of O(n-1) in processing order."""
    parity = ODD if (n - 1) % 2 else EVEN
    return [w for w in enumerate_weights((n - 1) // 2, parity, weight_bound) if w.last >= 0]


def lift(mu0: Weight, n: int) -> tuple[int, ...]:
    """Same coordinates as a weight of SO(n), padded with a zero when n is even."""
    return mu0.coords + ((0,) if n % 2 == 0 else ())


def reconstruct_multiplicities(provider: SpectraProvider, weight_bound: int, nu_max,
                               convention: str = "A") -> MultiplicityTable:
    n = provider.n
    if n < 2:
        raise ValueError("reconstruction needs n >= 2")
    nu_max = Fraction(nu_max)
    zero = zero_multiplicities(provider, weight_bound)
    known: dict[OIrrep, dict] = {}  # sigma -> {nu: multiplicity}
    for mu0 in stabilizer_weights(n, weight_bound):
        coords = lift(mu0, n)
        for delta in (1, -1):
            tau = od.irrep(n, coords, delta)
            parts = od.branch(tau, "standard", convention)
            target = [s for s in parts if s.highest == mu0]
            if len(target) != 1:
                raise ReconstructionError(f"{tau} does not contain a unique constituent with weight {mu0}")
            sigma = target[0]
            partners = [s for s in parts if s.highest != mu0]
            missing = [s for s in partners if s not in known]
            if missing:
                raise ReconstructionError(f"partners {missing} of {sigma} not yet recovered")
            spec = provider.spectrum(tau, nu_max)
            nus = {nu for nu in spec.entries if nu > 0}
            for s in partners:
                nus.update(known[s])
            values = {}
            for nu in sorted(nus):
                v = spec[nu] - sum(known[s].get(nu, 0) for s in partners)
                if v < 0:
                    raise NegativeMultiplicityError(mu0, sigma, nu, v)
                if v:
                    values[nu] = v
            if sigma in known:
                # kappa = 0: both signs of delta determine the same family
                if known[sigma] != values:
                    raise InconsistentSpectraError(
                        f"{sigma}: the spectra of {tau} and its determinant twist disagree")
            known[sigma] = values
    cont = {(s, nu): v for s, vals in known.items() for nu, v in vals.items()}
    return MultiplicityTable(n, weight_bound, nu_max, zero, cont, convention)


def round_trip(provider: SpectraProvider, mult: MultiplicityTable) -> list[OIrrep]:
    """Catalog entries whose regenerated spectrum differs from the provider's."""
    bad = []
    for tau in od.catalog(mult.n, mult.weight_bound):
        regenerated = tau_spectrum_from_multiplicities(mult, tau)
        if regenerated.entries != provider.spectrum(tau, mult.nu_max).entries:
            bad.append(tau)
    return bad


# -- comparisons ----------------------------------------------------------------

@dataclass(frozen=True)
class EquivalenceVerdict:
    weight_bound: int
    nu_max: Fraction
    witness: TauTilde | PiSigmaR | None = None
    values: tuple | None = None  # (n1, n2) at the witness

    @property
    def equivalent(self) -> bool:
        return self.witness is None

    def to_json(self) -> dict:
        out = {"equivalent_up_to_cutoffs": self.equivalent}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
            out["multiplicities"] = list(self.values)
        return out


def first_difference(m1: MultiplicityTable, m2: MultiplicityTable):
    """Order-minimal pi with different multiplicities: tau-tilde first, then by (nu, sigma)."""
    m2 = m2.relabeled(m1.convention)
    for tau in sorted(set(m1.zero_part) | set(m2.zero_part)):
        a, b = m1.zero_part.get(tau, 0), m2.zero_part.get(tau, 0)
        if a != b:
            return TauTilde(tau), (a, b)
    keys = set(m1.continuous_part) | set(m2.continuous_part)
    for sigma, nu in sorted(keys, key=lambda k: (k[1], k[0].sort_key())):
        a, b = m1.continuous(sigma, nu), m2.continuous(sigma, nu)
        if a != b:
            return PiSigmaR(sigma, nu), (a, b)
    return None


def compare_tables(m1: MultiplicityTable, m2: MultiplicityTable) -> EquivalenceVerdict:
    diff = first_difference(m1, m2)
    bound, nu_max = min(m1.weight_bound, m2.weight_bound), min(m1.nu_max, m2.nu_max)
    if diff is None:
        return EquivalenceVerdict(bound, nu_max)
    return EquivalenceVerdict(bound, nu_max, diff[0], diff[1])


def are_representation_equivalent(g1: BieberbachGroup, g2: BieberbachGroup, weight_bound: int, nu_max,
                                  convention: str = "A", threads: int = 1) -> EquivalenceVerdict:
    if g1.n != g2.n:
        raise ValueError("groups act in different dimensions")
    m1 = reconstruct_multiplicities(OracleProvider(g1, threads), weight_bound, nu_max, convention)
    m2 = reconstruct_multiplicities(OracleProvider(g2, threads), weight_bound, nu_max, convention)
    return compare_tables(m1, m2)


@dataclass(frozen=True)
class StrongIsospectralityReport:
    groups: tuple[str, str]
    weight_bound: int
    nu_max: Fraction
    verdicts: tuple[IsospectralVerdict, ...]
    equivalence: EquivalenceVerdict

    @property
    def all_isospectral(self) -> bool:
        return all(v.equal for v in self.verdicts)

    @property
    def first_distinguishing(self) -> IsospectralVerdict | None:
        return next((v for v in self.verdicts if not v.equal), None)

    @property
    def consistent(self) -> bool:
        """All tau-isospectral exactly when representation equivalent, at these cutoffs."""
        return self.all_isospectral == self.equivalence.equivalent

    def to_json(self) -> dict:
        first = self.first_distinguishing
        return {
            "groups": list(self.groups),
            "weight_bound": self.weight_bound,
            "nu_max": format_rational(self.nu_max),
            "all_tau_isospectral_up_to_cutoffs": self.all_isospectral,
            "first_distinguishing": first.to_json() if first else None,
            "representation_equivalence": self.equivalence.to_json(),
            "consistent": self.consistent,
            "verdicts": [v.to_json() for v in self.verdicts],
        }

    def to_text(self) -> str:
        g1, g2 = self.groups
        lines = [f"compare {g1} vs {g2} (weight bound {self.weight_bound}, "
                 f"nu_max {self.nu_max})"]
        for v in self.verdicts:
            if v.equal:
                lines.append(f"  {v.tau}: equal")
            else:
                nu, d1, d2 = v.mismatch
                lines.append(f"  {v.tau}: differ at nu={nu} ({d1} vs {d2})")
        first = self.first_distinguishing
        lines.append("all tau-isospectral up to cutoffs: " + ("yes" if self.all_isospectral else "no"))
        if first:
            lines.append(f"first distinguishing tau: {first.tau}")
        eq = self.equivalence
        if eq.equivalent:
            lines.append("representation equivalent up to cutoffs: yes")
        else:
            lines.append(f"representation equivalent up to cutoffs: no, witness {eq.witness} "
                         f"({eq.values[0]} vs {eq.values[1]})")
        lines.append("consistent: " + ("yes" if self.consistent else "NO"))
        return "\n".join(lines) + "\n"


def strong_isospectrality_report(g1: BieberbachGroup, g2: BieberbachGroup, weight_bound: int, nu_max,
                                 convention: str = "A", threads: int = 1) -> StrongIsospectralityReport:
    if g1.n != g2.n:
        raise ValueError("groups act in different dimensions")
    nu_max = Fraction(nu_max)
    p1, p2 = OracleProvider(g1, threads), OracleProvider(g2, threads)
    verdicts = []
    for tau in od.catalog(g1.n, weight_bound):
        s1, s2 = p1.spectrum(tau, nu_max), p2.spectrum(tau, nu_max)
        verdicts.append(IsospectralVerdict(tau, nu_max, s1.first_mismatch(s2)))
    m1 = reconstruct_multiplicities(p1, weight_bound, nu_max, convention)
    m2 = reconstruct_multiplicities(p2, weight_bound, nu_max, convention)
    return StrongIsospectralityReport((g1.name, g2.name), weight_bound, nu_max, tuple(verdicts),
                                      compare_tables(m1, m2))


# -- search ---------------------------------------------------------------------

@dataclass(frozen=True)
class DistinguishingPair:
    first: BieberbachGroup
    second: BieberbachGroup
    verdict: IsospectralVerdict

    def to_json(self) -> dict:
        return {"first": self.first.name, "second": self.second.name, **self.verdict.to_json()}


@dataclass
class SearchResult:
    members: int
    buckets: list = field(default_factory=list)  # lists of names sharing the trivial spectrum
    pairs: list = field(default_factory=list)  # DistinguishingPair
    groups: dict = field(default_factory=dict)  # name -> group, for buckets with several members

    def to_json(self) -> dict:
        return {
            "members": self.members,
            "buckets": [b for b in self.buckets if len(b) > 1],
            "pairs": [p.to_json() for p in self.pairs],
        }


def search_distinguishing_pairs(desc: FamilyDescriptor, weight_bound: int, nu_max,
                                threads: int = 1) -> SearchResult:
    """Bucket the family by trivial-bundle spectrum; report pairs a higher tau tells apart."""
    nu_max = Fraction(nu_max)
    groups = diagonal_family(desc)
    trivial = od.trivial(desc.n)
    buckets: dict = {}
    for g in groups:
        spec = tau_spectrum_oracle(g, trivial, nu_max, threads)
        buckets.setdefault(tuple(spec.entries.items()), []).append(g)
    result = SearchResult(len(groups))
    taus = [t for t in od.catalog(desc.n, weight_bound) if t != trivial]
    for members in buckets.values():
        result.buckets.append([g.name for g in members])
        if len(members) > 1:
            result.groups.update((g.name, g) for g in members)
        for g1, g2 in itertools.combinations(members, 2):
            for tau in taus:
                s1 = tau_spectrum_oracle(g1, tau, nu_max, threads)
                s2 = tau_spectrum_oracle(g2, tau, nu_max, threads)
                mismatch = s1.first_mismatch(s2)
                if mismatch:
                    result.pairs.append(DistinguishingPair(g1, g2, IsospectralVerdict(tau, nu_max, mismatch)))
                    break
    return result


def support(tau: OIrrep, convention: str = "A") -> motion.Support:
    return motion.ghat_tau(tau, convention)
