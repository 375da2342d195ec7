"""Structural profile of relations and the complexity classification of sets.

A relation set falls into one of four classes, each pinning the complexity
of satisfiability, connectivity, st-connectivity and the worst-case
solution-graph diameter of formulas built from the set:

  CPSS                   conn P            st-conn P   sat P            diam O(n)
  SchaeferNotCPSS        conn coNP-compl.  st-conn P   sat P            diam O(n)
  SafelyTightNotSchaefer conn coNP-compl.  st-conn P   sat NP-compl.    diam O(n)
  NotSafelyTight         conn PSPACE-c.    st-conn PSPACE-c.  sat NP-c. diam 2^Omega(sqrt(n))
"""

from __future__ import annotations

from dataclasses import dataclass, asdict
from typing import Iterable, Sequence

from .errors import ArityLimitError, RelationError
from .relations import (AFFINE, BIJUNCTIVE, DUAL_HORN, HORN, IHSB_MINUS,
                        IHSB_PLUS, ONE_VALID, SAFE_CHECK_ARITY_MAX, ZERO_VALID,
                        Relation, check_property, componentwise,
                        enumerate_identifications, is_nand_free, is_or_free)

CPSS = "CPSS"
SCHAEFER_NOT_CPSS = "SchaeferNotCPSS"
SAFELY_TIGHT_NOT_SCHAEFER = "SafelyTightNotSchaefer"
NOT_SAFELY_TIGHT = "NotSafelyTight"

SET_CLASSES = (CPSS, SCHAEFER_NOT_CPSS, SAFELY_TIGHT_NOT_SCHAEFER, NOT_SAFELY_TIGHT)
SCHAEFER_ORDER = [BIJUNCTIVE, HORN, DUAL_HORN, AFFINE]


@dataclass(frozen=True)
class RelationProfile:
    """All structural facts about one relation that the classification uses.

    The five safely_* fields need an identification sweep, so they are None
    when the arity exceeds SAFE_CHECK_ARITY_MAX.
    """

    name: str | None
    arity: int
    zero_valid: bool
    one_valid: bool
    bijunctive: bool
    horn: bool
    dual_horn: bool
    affine: bool
    ihsb_minus: bool
    ihsb_plus: bool
    or_free: bool
    nand_free: bool
    componentwise_bijunctive: bool
    componentwise_ihsb_minus: bool
    componentwise_ihsb_plus: bool
    safely_componentwise_bijunctive: bool | None
    safely_or_free: bool | None
    safely_nand_free: bool | None
    safely_componentwise_ihsb_minus: bool | None
    safely_componentwise_ihsb_plus: bool | None

    def as_dict(self) -> dict:
        return asdict(self)


def profile(rel: Relation) -> RelationProfile:
    """Compute the full profile with a single identification sweep."""
    safe: dict[str, bool | None]
    if rel.arity <= SAFE_CHECK_ARITY_MAX:
        safe = {
            "safely_componentwise_bijunctive": True,
            "safely_or_free": True,
            "safely_nand_free": True,
            "safely_componentwise_ihsb_minus": True,
            "safely_componentwise_ihsb_plus": True,
        }
        for r in enumerate_identifications(rel):
            if safe["safely_componentwise_bijunctive"] and not componentwise(r, BIJUNCTIVE):
                safe["safely_componentwise_bijunctive"] = False
            if safe["safely_or_free"] and not is_or_free(r):
                safe["safely_or_free"] = False
            if safe["safely_nand_free"] and not is_nand_free(r):
                safe["safely_nand_free"] = False
            if safe["safely_componentwise_ihsb_minus"] and not componentwise(r, IHSB_MINUS):
                safe["safely_componentwise_ihsb_minus"] = False
            if safe["safely_componentwise_ihsb_plus"] and not componentwise(r, IHSB_PLUS):
                safe["safely_componentwise_ihsb_plus"] = False
            if not any(safe.values()):
                break
    else:
        safe = dict.fromkeys((
            "safely_componentwise_bijunctive", "safely_or_free",
            "safely_nand_free", "safely_componentwise_ihsb_minus",
            "safely_componentwise_ihsb_plus"), None)
    return RelationProfile(
        name=rel.name,
        arity=rel.arity,
        zero_valid=check_property(rel, ZERO_VALID),
        one_valid=check_property(rel, ONE_VALID),
        bijunctive=check_property(rel, BIJUNCTIVE),
        horn=check_property(rel, HORN),
        dual_horn=check_property(rel, DUAL_HORN),
        affine=check_property(rel, AFFINE),
        ihsb_minus=check_property(rel, IHSB_MINUS),
        ihsb_plus=check_property(rel, IHSB_PLUS),
        or_free=is_or_free(rel),
        nand_free=is_nand_free(rel),
        componentwise_bijunctive=componentwise(rel, BIJUNCTIVE),
        componentwise_ihsb_minus=componentwise(rel, IHSB_MINUS),
        componentwise_ihsb_plus=componentwise(rel, IHSB_PLUS),
        **safe,
    )


@dataclass(frozen=True)
class SetClassification:
    set_class: str
    tight: bool
    safely_tight: bool
    schaefer: bool
    cpss: bool
    schaefer_kinds: tuple[str, ...]  # which of the four clause classes cover the set
    cpss_kinds: tuple[str, ...]      # which rows of the CPSS definition apply

    def to_json(self) -> dict:
        return {
            "set_class": self.set_class,
            "tight": self.tight,
            "safely_tight": self.safely_tight,
            "schaefer": self.schaefer,
            "cpss": self.cpss,
            "schaefer_kinds": list(self.schaefer_kinds),
            "cpss_kinds": list(self.cpss_kinds),
        }


def _need(value: bool | None, what: str) -> bool:
    if value is None:
        raise ArityLimitError(
            f"classification needs {what}, which requires arity <= {SAFE_CHECK_ARITY_MAX}")
    return value


def classify_set(relations: Sequence[Relation],
                 profiles: Iterable[RelationProfile] | None = None) -> SetClassification:
    """Place a finite relation set into the four-way classification."""
    if not relations:
        raise RelationError("cannot classify an empty relation set")
    profs = list(profiles) if profiles is not None else [profile(r) for r in relations]

    schaefer_kinds = []
    if all(p.bijunctive for p in profs):
        schaefer_kinds.append(BIJUNCTIVE)
    if all(p.horn for p in profs):
        schaefer_kinds.append(HORN)
    if all(p.dual_horn for p in profs):
        schaefer_kinds.append(DUAL_HORN)
    if all(p.affine for p in profs):
        schaefer_kinds.append(AFFINE)
    schaefer = bool(schaefer_kinds)

    cpss_kinds = []
    if all(p.bijunctive for p in profs):
        cpss_kinds.append(BIJUNCTIVE)
    if all(p.affine for p in profs):
        cpss_kinds.append(AFFINE)
    for kind, flag_name in ((HORN, "safely_componentwise_ihsb_minus"),
                            (DUAL_HORN, "safely_componentwise_ihsb_plus")):
        if not all(getattr(p, kind) for p in profs):
            continue
        flags = [getattr(p, flag_name) for p in profs]
        if any(f is None for f in flags):
            if not cpss_kinds:  # the decision genuinely depends on the sweep
                _need(None, "a safely-componentwise check")
        elif all(flags):
            cpss_kinds.append(kind)
    cpss_kinds.sort(key=SCHAEFER_ORDER.index)
    cpss = bool(cpss_kinds)

    tight = (all(p.componentwise_bijunctive for p in profs)
             or all(p.or_free for p in profs)
             or all(p.nand_free for p in profs))
    if schaefer:
        safely_tight = True  # every Schaefer set is safely tight
    else:
        safely_tight = (
            all(_need(p.safely_componentwise_bijunctive, "a safely check") for p in profs)
            or all(_need(p.safely_or_free, "a safely check") for p in profs)
            or all(_need(p.safely_nand_free, "a safely check") for p in profs))

    if cpss:
        set_class = CPSS
    elif schaefer:
        set_class = SCHAEFER_NOT_CPSS
    elif safely_tight:
        set_class = SAFELY_TIGHT_NOT_SCHAEFER
    else:
        set_class = NOT_SAFELY_TIGHT
    return SetClassification(set_class, tight, safely_tight, schaefer, cpss,
                             tuple(schaefer_kinds), tuple(cpss_kinds))


@dataclass(frozen=True)
class Predictions:
    sat: str
    conn: str
    st_conn: str
    diameter_bound: str

    def to_json(self) -> dict:
        return {"sat": self.sat, "conn": self.conn, "st_conn": self.st_conn,
                "diameter_bound": self.diameter_bound}


_TABLE = {
    CPSS: Predictions("P", "P", "P", "O(n)"),
    SCHAEFER_NOT_CPSS: Predictions("P", "coNP-complete", "P", "O(n)"),
    SAFELY_TIGHT_NOT_SCHAEFER: Predictions("NP-complete", "coNP-complete", "P", "O(n)"),
    NOT_SAFELY_TIGHT: Predictions("NP-complete", "PSPACE-complete",
                                  "PSPACE-complete", "2^Omega(sqrt(n))"),
}


def predict(classification: SetClassification) -> Predictions:
    """Complexity row for the classification's class."""
    return _TABLE[classification.set_class]
