"""Exhaustive analysis of the solution graph of a formula.

The solution graph has the satisfying assignments as vertices, adjacent
iff they differ in exactly one variable.  Everything here materialises the
full assignment space as a bitmask (see bitspace), so it is exact and fast
up to BRUTE_VARS_MAX variables.  An unsatisfiable formula counts as
connected and as having diameter 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import bitspace
from .errors import NotASolutionError, VarsLimitError
from .formulas import Formula
from .relations import Relation

BRUTE_VARS_MAX = 24


def _check_size(phi: Formula) -> int:
    n = phi.n
    if n > BRUTE_VARS_MAX:
        raise VarsLimitError(
            f"{n} variables exceed the exhaustive bound {BRUTE_VARS_MAX}")
    return n


def solution_space(phi: Formula) -> int:
    """Bitmask over all 2^n assignments; bit i set iff assignment i satisfies phi.

    Assignment index i encodes phi.variables with the first variable as the
    most significant bit.
    """
    n = _check_size(phi)
    full = bitspace.full_mask(n)
    space = full
    pos = {v: n - 1 - j for j, v in enumerate(phi.variables)}
    for c in phi.constraints:
        rel = phi.relation_of(c)
        arity = rel.arity
        indicator = 0
        for t in rel.members:
            term = full
            ok = True
            for slot, a in enumerate(c.args):
                bit = (t >> (arity - 1 - slot)) & 1
                if a == "0" or a == "1":
                    if bit != (a == "1"):
                        ok = False
                        break
                    continue
                col = bitspace.coord_mask(n, pos[a])
                term &= col if bit else full ^ col
                if not term:
                    ok = False
                    break
            if ok:
                indicator |= term
        space &= indicator
        if not space:
            break
    return space


def solutions(phi: Formula) -> list[int]:
    """Satisfying assignment indices, ascending."""
    return list(bitspace.iter_bits(solution_space(phi)))


def solution_strings(phi: Formula) -> list[str]:
    n = phi.n
    return [bitspace.tuple_of_index(i, n) for i in solutions(phi)]


def formula_relation(phi: Formula) -> Relation:
    """The set of solutions as a relation over the variables in name order."""
    order = sorted(phi.variables)
    n = phi.n
    perm = [phi.variables.index(v) for v in order]
    members = set()
    for idx in bitspace.iter_bits(solution_space(phi)):
        out = 0
        for j, src in enumerate(perm):
            out |= ((idx >> (n - 1 - src)) & 1) << (n - 1 - j)
        members.add(out)
    return Relation(n, frozenset(members))


def component_spaces(phi: Formula) -> list[int]:
    """Connected components as bitmasks, ordered by smallest assignment."""
    return bitspace.component_masks(solution_space(phi), phi.n)


def components(phi: Formula) -> list[list[str]]:
    n = phi.n
    return [[bitspace.tuple_of_index(i, n) for i in bitspace.iter_bits(m)]
            for m in component_spaces(phi)]


def is_connected(phi: Formula) -> bool:
    """At most one connected component (so unsatisfiable counts as connected)."""
    space = solution_space(phi)
    if not space:
        return True
    comp = bitspace.spread(space & -space, space, phi.n)
    return comp == space


def _index_of(phi: Formula, assignment: str) -> int:
    n = phi.n
    if len(assignment) != n or any(ch not in "01" for ch in assignment):
        raise NotASolutionError(
            f"assignment {assignment!r} is not a bitstring over {n} variables")
    return int(assignment, 2)


def st_connected(phi: Formula, s: str, t: str) -> tuple[bool, list[str] | None]:
    """Are two solutions in the same component?  Returns a shortest path too.

    The endpoints must satisfy the formula, otherwise NotASolutionError.
    """
    n = _check_size(phi)
    space = solution_space(phi)
    si, ti = _index_of(phi, s), _index_of(phi, t)
    for name, idx in (("s", si), ("t", ti)):
        if not (space >> idx) & 1:
            raise NotASolutionError(f"{name} does not satisfy the formula")
    levels = bitspace.bfs_levels(1 << si, space, n)
    hit = next((d for d, lv in enumerate(levels) if (lv >> ti) & 1), None)
    if hit is None:
        return False, None
    path = [ti]
    cur = ti
    for d in range(hit - 1, -1, -1):
        prev = bitspace.neighbors(1 << cur, n) & levels[d]
        cur = (prev & -prev).bit_length() - 1
        path.append(cur)
    path.reverse()
    return True, [bitspace.tuple_of_index(i, n) for i in path]


def distance(phi: Formula, s: str, t: str) -> int | None:
    """Shortest-path distance between two solutions, None if disconnected."""
    n = _check_size(phi)
    space = solution_space(phi)
    si, ti = _index_of(phi, s), _index_of(phi, t)
    for name, idx in (("s", si), ("t", ti)):
        if not (space >> idx) & 1:
            raise NotASolutionError(f"{name} does not satisfy the formula")
    for d, lv in enumerate(bitspace.bfs_levels(1 << si, space, n)):
        if (lv >> ti) & 1:
            return d
    return None


def diameter(phi: Formula) -> int:
    """Max over components of the largest shortest-path distance inside it."""
    n = _check_size(phi)
    best = 0
    for comp in component_spaces(phi):
        for src in bitspace.iter_bits(comp):
            ecc = bitspace.eccentricity(1 << src, comp, n)
            if ecc > best:
                best = ecc
    return best


def locally_minimal(phi: Formula) -> list[str]:
    """Solutions with no neighbouring solution of smaller Hamming weight.

    A neighbour is smaller exactly when it flips some 1 down to 0.
    """
    n = phi.n
    space = solution_space(phi)
    out = []
    for idx in bitspace.iter_bits(space):
        ones = idx
        minimal = True
        while ones:
            low = ones & -ones
            if (space >> (idx ^ low)) & 1:
                minimal = False
                break
            ones ^= low
        if minimal:
            out.append(bitspace.tuple_of_index(idx, n))
    return out


def component_minimum(comp_mask: int, n: int) -> str | None:
    """Coordinate-wise minimum of a component, when it lies in the component."""
    lower = ~0
    for idx in bitspace.iter_bits(comp_mask):
        lower &= idx
    return bitspace.tuple_of_index(lower, n) if (comp_mask >> lower) & 1 else None


@dataclass(frozen=True)
class SolutionGraphReport:
    n_variables: int
    n_solutions: int
    connected: bool
    diameter: int
    components: tuple[tuple[str, ...], ...]
    minimums: tuple[str | None, ...]
    locally_minimal: tuple[tuple[str, ...], ...]

    def to_json(self) -> dict:
        return {
            "n_variables": self.n_variables,
            "n_solutions": self.n_solutions,
            "connected": self.connected,
            "diameter": self.diameter,
            "components": [list(c) for c in self.components],
            "minimums": list(self.minimums),
            "locally_minimal": [list(c) for c in self.locally_minimal],
        }


def report(phi: Formula) -> SolutionGraphReport:
    n = phi.n
    comps = component_spaces(phi)
    loc_min = set(locally_minimal(phi))
    comp_tuples = []
    minimums = []
    loc_by_comp = []
    total = 0
    for m in comps:
        items = [bitspace.tuple_of_index(i, n) for i in bitspace.iter_bits(m)]
        total += len(items)
        comp_tuples.append(tuple(items))
        minimums.append(component_minimum(m, n))
        loc_by_comp.append(tuple(s for s in items if s in loc_min))
    return SolutionGraphReport(
        n_variables=n,
        n_solutions=total,
        connected=len(comps) <= 1,
        diameter=diameter(phi),
        components=tuple(comp_tuples),
        minimums=tuple(minimums),
        locally_minimal=tuple(loc_by_comp),
    )


def project_enumerate(phi: Formula, i: int) -> tuple[tuple[str, ...], Relation]:
    """Projection of the solution set onto constraint i's variables, by
    enumeration.  Tuple order: the constraint's distinct variables sorted."""
    c = phi.constraints[i]
    vars_ = tuple(sorted(c.variables()))
    n = phi.n
    src = [n - 1 - phi.variables.index(v) for v in vars_]
    k = len(vars_)
    members = set()
    for idx in bitspace.iter_bits(solution_space(phi)):
        a = 0
        for j, bitpos in enumerate(src):
            a |= ((idx >> bitpos) & 1) << (k - 1 - j)
        members.add(a)
    return vars_, Relation(k, frozenset(members))


def export_dot(phi: Formula) -> str:
    """Solution graph in DOT format, vertices labelled by assignment."""
    n = phi.n
    space = solution_space(phi)
    lines = ["graph solutions {"]
    for idx in bitspace.iter_bits(space):
        lines.append(f'  "{bitspace.tuple_of_index(idx, n)}";')
    for idx in bitspace.iter_bits(space):
        for p in range(n):
            other = idx ^ (1 << p)
            if other > idx and (space >> other) & 1:
                lines.append(f'  "{bitspace.tuple_of_index(idx, n)}" -- '
                             f'"{bitspace.tuple_of_index(other, n)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
