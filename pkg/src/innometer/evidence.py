"""Mass assignments over the frame of query indices, and their fusion.

The frame of discernment is {1..S}, the set of query indices.  A source's
evidence is a basic probability assignment: positive masses on nonempty
focal subsets, summing to at most one (exactly one for a freshly built
assignment; reliability discounting in "paper" style leaves the deficit
unassigned, so combined assignments may be subnormal).

Fusion follows the conjunctive rule: the product of two masses lands on the
intersection of their focal sets, products on empty intersections form the
conflict K, and surviving products are scaled by 1/(1-K).  On top of the
exact set-level result, :func:`combine` exposes an interval projection:
each surviving product is attributed to the interval of the *first*
argument's focal set.  That projection is intentionally asymmetric; it is
what lets a fused assignment be read as "mass per interval" again.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import EvidenceError, TotalConflictError

MASS_SUM_TOLERANCE = 1e-12


def _frame_set(frame_size: int) -> frozenset[int]:
    return frozenset(range(1, frame_size + 1))


@dataclass(frozen=True)
class MassAssignment:
    """Basic probability assignment over the frame {1..frame_size}.

    ``focal`` pairs each nonempty focal set with its positive mass.  When
    the assignment was built from an interval grouping, ``interval_of``
    maps every focal set to its 0-based interval index and
    ``interval_count`` records how many intervals the partition had.
    """

    frame_size: int
    focal: tuple[tuple[frozenset[int], float], ...]
    origin: str = ""
    interval_of: Mapping[frozenset[int], int] | None = None
    interval_count: int | None = None

    def __post_init__(self) -> None:
        if self.frame_size < 1:
            raise EvidenceError(f"frame size must be >= 1, got {self.frame_size}")
        object.__setattr__(
            self, "focal", tuple((frozenset(fs), float(w)) for fs, w in self.focal)
        )
        frame = _frame_set(self.frame_size)
        seen: set[frozenset[int]] = set()
        total = 0.0
        for fs, w in self.focal:
            if not fs:
                raise EvidenceError("empty focal set")
            if not fs <= frame:
                raise EvidenceError(f"focal set {sorted(fs)} outside frame of size {self.frame_size}")
            if fs in seen:
                raise EvidenceError(f"duplicate focal set {sorted(fs)}")
            seen.add(fs)
            if w <= 0.0:
                raise EvidenceError(f"mass for {sorted(fs)} must be positive, got {w}")
            total += w
        if total > 1.0 + MASS_SUM_TOLERANCE:
            raise EvidenceError(f"masses sum to {total}, above 1")
        if self.interval_of is not None:
            if self.interval_count is None or self.interval_count < 1:
                raise EvidenceError("interval_of given without a positive interval_count")
            for fs, _ in self.focal:
                if fs not in self.interval_of:
                    raise EvidenceError(f"focal set {sorted(fs)} has no interval mapping")
                idx = self.interval_of[fs]
                if not 0 <= idx < self.interval_count:
                    raise EvidenceError(f"interval index {idx} outside [0, {self.interval_count})")

    @property
    def total_mass(self) -> float:
        return sum(w for _, w in self.focal)

    def mass_of(self, subset: Iterable[int]) -> float:
        key = frozenset(subset)
        for fs, w in self.focal:
            if fs == key:
                return w
        return 0.0

    def to_json_dict(self) -> dict:
        items = []
        for fs, w in self.focal:
            entry: dict = {"set": sorted(fs), "mass": w}
            if self.interval_of is not None:
                entry["interval"] = self.interval_of[fs]
            items.append(entry)
        return {
            "frame_size": self.frame_size,
            "origin": self.origin,
            "interval_count": self.interval_count,
            "focal": items,
        }

    @classmethod
    def from_json_dict(cls, raw: dict) -> "MassAssignment":
        focal = tuple((frozenset(e["set"]), float(e["mass"])) for e in raw["focal"])
        interval_of = None
        if raw.get("interval_count") is not None and all("interval" in e for e in raw["focal"]):
            interval_of = {frozenset(e["set"]): int(e["interval"]) for e in raw["focal"]}
        return cls(
            frame_size=int(raw["frame_size"]),
            focal=focal,
            origin=raw.get("origin", ""),
            interval_of=interval_of,
            interval_count=raw.get("interval_count"),
        )


def vacuous(frame_size: int, origin: str = "") -> MassAssignment:
    """Total ignorance: all mass on the full frame."""
    return MassAssignment(frame_size, ((_frame_set(frame_size), 1.0),), origin=origin)


def base_probability(grouping, origin: str = "") -> MassAssignment:
    """Assignment from an interval grouping: m(A_i) = q_i / S.

    ``grouping`` is duck-typed: it needs ``groups`` (one frozenset of query
    indices per interval, possibly empty) and ``frame_size``.  Empty
    intervals contribute no focal set but still count toward the interval
    numbering carried in ``interval_of``.
    """
    groups = tuple(grouping.groups)
    s = grouping.frame_size
    if not any(groups):
        raise EvidenceError("grouping has no occupied interval")
    focal = []
    interval_of = {}
    for i, group in enumerate(groups):
        if group:
            fs = frozenset(group)
            focal.append((fs, len(fs) / s))
            interval_of[fs] = i
    return MassAssignment(
        frame_size=s,
        focal=tuple(focal),
        origin=origin,
        interval_of=interval_of,
        interval_count=len(groups),
    )


def belief(assignment: MassAssignment, subset: Iterable[int]) -> float:
    """Total mass of focal sets contained in ``subset``."""
    target = frozenset(subset)
    return sum(w for fs, w in assignment.focal if fs <= target)


def plausibility(assignment: MassAssignment, subset: Iterable[int]) -> float:
    """Total mass of focal sets intersecting ``subset``."""
    target = frozenset(subset)
    return sum(w for fs, w in assignment.focal if fs & target)


def _check_frames(m1: MassAssignment, m2: MassAssignment) -> None:
    if m1.frame_size != m2.frame_size:
        raise EvidenceError(
            f"frame sizes differ: {m1.frame_size} vs {m2.frame_size}"
        )


def conflict(m1: MassAssignment, m2: MassAssignment) -> float:
    """Conflict K: total product mass landing on empty intersections."""
    _check_frames(m1, m2)
    k = 0.0
    for a, wa in m1.focal:
        for b, wb in m2.focal:
            if not a & b:
                k += wa * wb
    return k


@dataclass(frozen=True)
class FusionResult:
    """Outcome of combining two assignments.

    ``combined`` is the exact set-level result.  ``interval_masses`` and
    ``belief_lower_half`` are present only when the first argument carried
    interval metadata: they give the projected mass per interval and the
    summed mass of the lower half of the intervals (the first floor(I/2)).
    """

    conflict: float
    combined: MassAssignment
    interval_masses: tuple[float, ...] | None = None
    belief_lower_half: float | None = None

    def to_json_dict(self) -> dict:
        return {
            "conflict": self.conflict,
            "combined": self.combined.to_json_dict(),
            "interval_masses": None if self.interval_masses is None else list(self.interval_masses),
            "belief_lower_half": self.belief_lower_half,
        }


def combine(m1: MassAssignment, m2: MassAssignment) -> FusionResult:
    """Conjunctive combination of two assignments on the same frame.

    Raises :class:`TotalConflictError` when K reaches 1.  The interval
    projection groups each surviving product by the interval of the first
    argument's focal set, so combine(m1, m2) and combine(m2, m1) agree at
    the set level but may project differently; callers who need the
    projection must put the anchor source first.
    """
    _check_frames(m1, m2)
    project = m1.interval_of is not None and m1.interval_count is not None
    interval_sums = [0.0] * m1.interval_count if project else None
    set_level: dict[frozenset[int], float] = {}
    k = 0.0
    for a, wa in m1.focal:
        for b, wb in m2.focal:
            w = wa * wb
            meet = a & b
            if not meet:
                k += w
                continue
            set_level[meet] = set_level.get(meet, 0.0) + w
            if interval_sums is not None:
                interval_sums[m1.interval_of[a]] += w
    if k >= 1.0 - MASS_SUM_TOLERANCE:
        raise TotalConflictError(
            f"sources are in total conflict (K = {k}); nothing survives combination"
        )
    norm = 1.0 - k
    ordered = sorted(set_level.items(), key=lambda item: (len(item[0]), sorted(item[0])))
    combined = MassAssignment(
        frame_size=m1.frame_size,
        focal=tuple((fs, w / norm) for fs, w in ordered),
        origin="+".join(p for p in (m1.origin, m2.origin) if p),
    )
    interval_masses = None
    lower_half = None
    if interval_sums is not None:
        interval_masses = tuple(w / norm for w in interval_sums)
        lower_half = sum(interval_masses[: m1.interval_count // 2])
    return FusionResult(
        conflict=k,
        combined=combined,
        interval_masses=interval_masses,
        belief_lower_half=lower_half,
    )


def discount(assignment: MassAssignment, alpha: float, style: str = "paper") -> MassAssignment:
    """Reliability discounting by factor alpha in [0, 1].

    "paper" style scales every mass by (1 - alpha) and leaves the removed
    mass unassigned, so the result can be subnormal.  "shafer" style moves
    the removed mass onto the full frame instead, keeping the total at one.
    alpha = 0 is the identity in both styles; alpha = 1 in shafer style is
    the vacuous assignment.
    """
    if not 0.0 <= alpha <= 1.0:
        raise EvidenceError(f"discount factor must be within [0, 1], got {alpha}")
    if style not in ("paper", "shafer"):
        raise EvidenceError(f"unknown discount style {style!r}; expected 'paper' or 'shafer'")
    if alpha == 0.0:
        return assignment
    keep = 1.0 - alpha
    if style == "paper":
        focal = tuple((fs, w * keep) for fs, w in assignment.focal if w * keep > 0.0)
        interval_of = assignment.interval_of
        interval_count = assignment.interval_count
        if not focal:
            interval_of = None
            interval_count = None
        return MassAssignment(
            frame_size=assignment.frame_size,
            focal=focal,
            origin=assignment.origin,
            interval_of=interval_of,
            interval_count=interval_count,
        )
    frame = _frame_set(assignment.frame_size)
    masses: dict[frozenset[int], float] = {
        fs: w * keep for fs, w in assignment.focal if w * keep > 0.0
    }
    masses[frame] = masses.get(frame, 0.0) + alpha
    # The frame gains mass it may not have had an interval for, so the
    # projection metadata survives only if the frame was already mapped.
    interval_of = assignment.interval_of
    interval_count = assignment.interval_count
    if interval_of is not None and frame not in interval_of:
        interval_of = None
        interval_count = None
    ordered = sorted(masses.items(), key=lambda item: (len(item[0]), sorted(item[0])))
    return MassAssignment(
        frame_size=assignment.frame_size,
        focal=tuple(ordered),
        origin=assignment.origin,
        interval_of=interval_of,
        interval_count=interval_count,
    )
