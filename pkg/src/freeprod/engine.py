"""Classification engine for N-fold free products of atomic-plus-diffuse factors.

Enumerates atom tuples whose deficit sum Sum(1 - mass) is at most 1,
splits them into direct summands (deficit < 1, every chosen atom isolated)
and characters (deficit = 1, or deficit < 1 with a non-isolated choice),
and derives the verdict set and the full ideal lattice.  Everything here is
exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import (
    DegenerateProblem,
    RefusedTwoProjectionCase,
    TailUndecidable,
)
from .model import (
    DEGENERATE,
    TWO_PROJECTION_CASE,
    FactorSpec,
    NormalizedProblem,
    TailSpec,
    format_rational,
)

ZERO = Fraction(0)
ONE = Fraction(1)

NOT_CLAIMED = "not_claimed"


@dataclass(frozen=True)
class AtomTuple:
    """One atom choice per factor, with its total deficit Sum(1 - mass).

    For infinite problems the choices cover the explicit prefix only and
    ``tail_maximal`` records that the maximal atom is chosen in every tail
    factor (the only way an infinite tuple can keep its deficit finite).
    """

    choices: tuple[tuple[str, str], ...]  # (factor name, atom label)
    deficit_sum: Fraction
    all_isolated: bool = True
    tail_maximal: bool = False

    @property
    def gamma(self) -> Fraction:
        return ONE - self.deficit_sum

    def label(self) -> str:
        parts = [f"{f}:{a}" for f, a in self.choices]
        if self.tail_maximal:
            parts.append("tail:max…")
        return "(" + ",".join(parts) + ")"


@dataclass(frozen=True)
class VerdictSet:
    afr_simple: bool
    afr0_simple: bool
    afr00_simple: bool
    afr00_nonunital: bool
    trace_exists: bool
    trace_unique: bool
    stable_rank_one: str  # "true" | "not_claimed"
    special_case: Optional[str] = None

    def to_json(self) -> dict:
        out = {
            "afr_simple": self.afr_simple,
            "afr0_simple": self.afr0_simple,
            "afr00_simple": self.afr00_simple,
            "afr00_nonunital": self.afr00_nonunital,
            "trace_exists": self.trace_exists,
            "trace_unique": self.trace_unique,
            "stable_rank_one": self.stable_rank_one,
        }
        if self.special_case is not None:
            out["special_case"] = self.special_case
        return out


@dataclass(frozen=True)
class StructureReport:
    summands: tuple[tuple[AtomTuple, Fraction], ...]
    characters: tuple[AtomTuple, ...]
    r0_trace: Fraction
    verdicts: VerdictSet
    diffuse_witnesses: tuple[tuple[tuple[str, str], bool], ...]
    infinite: bool = False
    gamma0_as_printed: Optional[Fraction] = None

    @property
    def ideal_count(self) -> int:
        return 2 ** len(self.summands) * (2 ** len(self.characters) + 1)


@dataclass(frozen=True)
class IdealDescriptor:
    """A closed two-sided ideal of the free product.

    ``killed_summands`` are the one-dimensional summands contained in the
    ideal (they vanish in the quotient).  ``character_part`` describes the
    intersection with the corner algebra: ``None`` means zero, a frozenset F
    of character indices means the intersection of the kernels over F (the
    empty set meaning the whole corner algebra).
    """

    killed_summands: frozenset[int]
    character_part: Optional[frozenset[int]]

    def is_zero(self) -> bool:
        return not self.killed_summands and self.character_part is None


def intersect_ideals(d1: IdealDescriptor, d2: IdealDescriptor) -> IdealDescriptor:
    """Lattice meet: intersect summand sets; kernel sets unite; zero absorbs."""
    killed = d1.killed_summands & d2.killed_summands
    if d1.character_part is None or d2.character_part is None:
        part = None
    else:
        part = d1.character_part | d2.character_part
    return IdealDescriptor(killed, part)


def _atom_candidates(factor: FactorSpec, budget: Fraction):
    """Atoms of the factor whose deficit alone fits within the budget."""
    return [a for a in factor.atoms if a.deficit() <= budget]


def classify_atom_tuples(
    problem: NormalizedProblem,
) -> tuple[list[AtomTuple], list[AtomTuple]]:
    """Enumerate summand and character tuples for a finite problem.

    Branch-and-bound on partial deficit sums: each factor's candidates are
    pre-filtered against the budget left by the minimal deficits of the
    remaining factors, so branches that cannot stay within deficit 1 are
    never opened.
    """
    factors = problem.factors
    n = len(factors)
    min_deficit = [
        min((a.deficit() for a in f.atoms), default=ONE) if f.atoms else None
        for f in factors
    ]
    # A factor with no atoms admits no choice at all: no tuples exist.
    if any(m is None for m in min_deficit):
        return [], []
    suffix_min = [ZERO] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix_min[i] = suffix_min[i + 1] + min_deficit[i]

    summands: list[AtomTuple] = []
    characters: list[AtomTuple] = []

    def walk(i: int, partial: Fraction, choices, isolated: bool):
        if i == n:
            t = AtomTuple(tuple(choices), partial, all_isolated=isolated)
            if partial < 1 and isolated:
                summands.append(t)
            else:  # deficit == 1, or < 1 with a non-isolated choice
                characters.append(t)
            return
        budget = ONE - partial - suffix_min[i + 1]
        for atom in _atom_candidates(factors[i], budget):
            walk(
                i + 1,
                partial + atom.deficit(),
                choices + [(factors[i].name, atom.label)],
                isolated and atom.isolated,
            )

    walk(0, ZERO, [], True)
    key = lambda t: (t.deficit_sum, t.choices)
    summands.sort(key=key)
    characters.sort(key=key)
    return summands, characters


def _verdicts(
    problem: NormalizedProblem,
    summands,
    characters,
) -> VerdictSet:
    trace_exists = all(
        f.diffuse_mass == 0 or f.diffuse_state_is_trace for f in problem.factors
    )
    return VerdictSet(
        afr_simple=(not summands and not characters),
        afr0_simple=(not characters),
        afr00_simple=True,
        afr00_nonunital=bool(characters),
        trace_exists=trace_exists,
        trace_unique=trace_exists,
        stable_rank_one="true" if trace_exists else NOT_CLAIMED,
        special_case=problem.special_case,
    )


def _diffuse_witnesses(problem: NormalizedProblem):
    # The corner algebra's state centralizer contains a diffuse abelian
    # subalgebra through every compressed atom; emitted as metadata.
    return tuple(
        ((f.name, a.label), True) for f in problem.factors for a in f.atoms
    )


def decompose(problem: NormalizedProblem) -> StructureReport:
    """Full structure report for a finite problem (N >= 2 factors, no tail)."""
    if problem.tail is not None:
        return decompose_infinite(problem)
    if problem.special_case == DEGENERATE or problem.n_factors < 2:
        raise DegenerateProblem(
            "fewer than two effective factors; the free product is trivial"
        )
    if problem.special_case == TWO_PROJECTION_CASE:
        raise RefusedTwoProjectionCase(
            "both factors are two-point algebras; use two_projection_structure"
        )

    summand_tuples, character_tuples = classify_atom_tuples(problem)
    summands = tuple((t, t.gamma) for t in summand_tuples)
    r0_trace = ONE - sum((g for _, g in summands), ZERO)
    return StructureReport(
        summands=summands,
        characters=tuple(character_tuples),
        r0_trace=r0_trace,
        verdicts=_verdicts(problem, summands, character_tuples),
        diffuse_witnesses=_diffuse_witnesses(problem),
    )


def decompose_infinite(problem: NormalizedProblem) -> StructureReport:
    """Structure report for an infinite product encoded as prefix + tail.

    Any tuple with finite deficit must take the maximal atom in all but
    finitely many factors; the tail data carries exactly the maximal-atom
    deficits, so tuples taking the maximal atom in *every* tail factor are
    decidable.  A tuple deviating in some tail factor has that factor's
    deficit >= 1 - d (a non-maximal atom has mass <= d); if such a tuple
    cannot be pushed above deficit 1 from the known lower bounds alone, the
    data does not decide membership and TailUndecidable is raised.

    Infinite products never produce one-dimensional direct summands, so
    every decided tuple is a character.
    """
    tail = problem.tail
    if tail is None:
        raise DegenerateProblem("decompose_infinite requires a tail")

    factors = problem.factors
    prefix_min = sum(
        (min((a.deficit() for a in f.atoms), default=ONE) for f in factors),
        ZERO,
    )

    tail_total = tail.total_deficit  # None = certified divergent
    characters: list[AtomTuple] = []
    if tail_total is not None:
        # Rule out deviations from the maximal atom in tail factors.
        for d in tail.explicit_deficits:
            if prefix_min + (tail_total - d) + (ONE - d) <= 1:
                raise TailUndecidable(
                    "a non-maximal choice in an explicit tail factor cannot "
                    "be excluded by the certified deficits"
                )
        rem = tail.remainder_sum_lower_bound
        if rem is not None and rem > 0:
            d = min(rem, ONE)  # a single unlisted factor could carry it all
            explicit = sum(tail.explicit_deficits, ZERO)
            if prefix_min + explicit + (rem - d) + (ONE - d) <= 1:
                raise TailUndecidable(
                    "a non-maximal choice in an unlisted tail factor cannot "
                    "be excluded by the certified remainder bound"
                )

        if factors:
            prefix_tuples: list[AtomTuple] = []

            def walk(i, partial, choices):
                if partial + tail_total > 1:
                    return
                if i == len(factors):
                    prefix_tuples.append(
                        AtomTuple(
                            tuple(choices),
                            partial + tail_total,
                            tail_maximal=True,
                        )
                    )
                    return
                for atom in factors[i].atoms:
                    walk(
                        i + 1,
                        partial + atom.deficit(),
                        choices + [(factors[i].name, atom.label)],
                    )

            walk(0, ZERO, [])
            characters = sorted(prefix_tuples, key=lambda t: (t.deficit_sum, t.choices))
        else:
            if tail_total <= 1:
                characters = [AtomTuple((), tail_total, tail_maximal=True)]

    r0_trace = ONE - sum((ONE - t.deficit_sum for t in characters), ZERO)
    gamma0_printed = ONE - sum((t.deficit_sum for t in characters), ZERO)

    trace_exists = all(
        f.diffuse_mass == 0 or f.diffuse_state_is_trace for f in factors
    )
    verdicts = VerdictSet(
        afr_simple=(not characters),
        afr0_simple=(not characters),
        afr00_simple=True,
        afr00_nonunital=bool(characters),
        trace_exists=trace_exists,
        trace_unique=trace_exists,
        stable_rank_one="true" if trace_exists else NOT_CLAIMED,
        special_case=problem.special_case,
    )
    return StructureReport(
        summands=(),
        characters=tuple(characters),
        r0_trace=r0_trace,
        verdicts=verdicts,
        diffuse_witnesses=_diffuse_witnesses(problem),
        infinite=True,
        gamma0_as_printed=gamma0_printed,
    )


def ideal_lattice(report: StructureReport) -> list[tuple[IdealDescriptor, dict]]:
    """All ideals, each annotated with unitality and (if unital) unit trace.

    The corner algebra's ideals are exactly zero and the kernel
    intersections over subsets of the characters: its essential simple ideal
    forces any nonzero ideal to contain it, and the quotient by it is the
    finite-dimensional algebra C^{#characters}.  Crossing with arbitrary
    subsets of the one-dimensional summands gives
    2^#summands * (2^#characters + 1) ideals.  Kernel intersections over a
    nonempty character subset are nonunital; the zero character part and the
    whole corner are unital.
    """
    s = len(report.summands)
    c = len(report.characters)
    gammas = [g for _, g in report.summands]
    out: list[tuple[IdealDescriptor, dict]] = []
    for killed_mask in range(2**s):
        killed = frozenset(i for i in range(s) if killed_mask >> i & 1)
        killed_trace = sum((gammas[i] for i in killed), ZERO)
        parts: list[Optional[frozenset[int]]] = [None]
        for f_mask in range(2**c):
            parts.append(frozenset(j for j in range(c) if f_mask >> j & 1))
        for part in parts:
            desc = IdealDescriptor(killed, part)
            if part is None:
                ann = {"unital": True, "unit_trace": killed_trace}
            elif len(part) == 0:
                ann = {"unital": True, "unit_trace": killed_trace + report.r0_trace}
            else:
                ann = {"unital": False, "unit_trace": None}
            out.append((desc, ann))
    assert len(out) == report.ideal_count
    return out


# ---------------------------------------------------------------------------
# Report serialization
# ---------------------------------------------------------------------------

def tuple_to_json(t: AtomTuple) -> dict:
    obj: dict = {"tuple": {f: a for f, a in t.choices}}
    if t.tail_maximal:
        obj["tail"] = "maximal"
    return obj


def report_to_json(report: StructureReport) -> dict:
    out: dict = {
        "summands": [
            dict(tuple_to_json(t), gamma=format_rational(g))
            for t, g in report.summands
        ],
        "characters": [tuple_to_json(t) for t in report.characters],
        "r0_trace": format_rational(report.r0_trace),
        "verdicts": report.verdicts.to_json(),
        "ideal_count": report.ideal_count,
        "diffuse_witnesses": {
            f"{f}:{a}": w for (f, a), w in report.diffuse_witnesses
        },
    }
    if report.infinite:
        out["infinite"] = True
        out["gamma0_as_printed"] = format_rational(report.gamma0_as_printed)
    return out


def ideals_to_json(report: StructureReport) -> dict:
    items = []
    for desc, ann in ideal_lattice(report):
        items.append(
            {
                "killed_summands": sorted(desc.killed_summands),
                "character_part": (
                    "zero" if desc.character_part is None
                    else sorted(desc.character_part)
                ),
                "unital": ann["unital"],
                "unit_trace": (
                    format_rational(ann["unit_trace"])
                    if ann["unit_trace"] is not None
                    else None
                ),
            }
        )
    return {"ideal_count": report.ideal_count, "ideals": items}
