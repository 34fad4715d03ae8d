"""Small integer programs over bounded domains.

The solver is a depth-first search with bounds propagation on each linear
row; there is no LP relaxation.  It is meant for the compact models the
ESSD and ESPC builders produce, not for general use.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .core import CapExceeded, cap_limit

DEFAULT_NODE_CAP = 2_000_000

SENSES = ("<=", "=", ">=")


@dataclass(frozen=True)
class Variable:
    name: str
    lb: int
    ub: int


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[tuple[int, int], ...]  # (variable index, coefficient)
    sense: str
    rhs: int
    name: str = ""

    def holds(self, values) -> bool:
        lhs = sum(c * values[i] for i, c in self.coeffs)
        if self.sense == "<=":
            return lhs <= self.rhs
        if self.sense == ">=":
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass
class IpModel:
    """Integer variables with finite bounds, linear rows, optional max objective."""

    name: str = "model"
    variables: list[Variable] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    objective: dict[int, int] | None = None
    meta: dict = field(default_factory=dict, repr=False)
    _index: dict[str, int] = field(default_factory=dict, repr=False)

    def add_var(self, name: str, lb: int, ub: int) -> int:
        if name in self._index:
            raise ValueError(f"duplicate variable {name!r}")
        if lb > ub:
            raise ValueError(f"empty domain for {name!r}: [{lb}, {ub}]")
        self._index[name] = len(self.variables)
        self.variables.append(Variable(name, int(lb), int(ub)))
        return self._index[name]

    def var(self, name: str) -> int:
        return self._index[name]

    def add_constraint(self, coeffs, sense: str, rhs: int, name: str = "") -> Constraint:
        if sense not in SENSES:
            raise ValueError(f"unknown sense {sense!r}")
        merged: dict[int, int] = {}
        for i, c in dict(coeffs).items() if isinstance(coeffs, dict) else coeffs:
            if not 0 <= i < len(self.variables):
                raise ValueError(f"constraint references undeclared variable {i}")
            merged[i] = merged.get(i, 0) + int(c)
        row = Constraint(tuple((i, c) for i, c in sorted(merged.items()) if c), sense, int(rhs),
                         name or f"c{len(self.constraints) + 1}")
        self.constraints.append(row)
        return row

    def maximize(self, coeffs: dict[int, int]) -> None:
        self.objective = {i: int(c) for i, c in coeffs.items() if c}

    def is_feasible(self, values) -> bool:
        if len(values) != len(self.variables):
            return False
        if any(not v.lb <= x <= v.ub for v, x in zip(self.variables, values)):
            return False
        return all(row.holds(values) for row in self.constraints)

    def search_space(self) -> int:
        size = 1
        for v in self.variables:
            size *= v.ub - v.lb + 1
        return size


class _Infeasible(Exception):
    pass


def _propagate(rows, var_rows, lo, hi, dirty) -> None:
    """Tighten ``lo``/``hi`` in place until no row changes them."""
    queue = list(dirty)
    queued = set(queue)
    while queue:
        r = queue.pop()
        queued.discard(r)
        coeffs, sense, rhs = rows[r]
        for upper, sign in ((True, 1), (False, -1)):
            # each pass handles sum(sign*a*x) <= sign*rhs
            if upper and sense == ">=":
                continue
            if not upper and sense == "<=":
                continue
            b = sign * rhs
            minact = 0
            for i, a in coeffs:
                a *= sign
                minact += a * (lo[i] if a > 0 else hi[i])
            if minact > b:
                raise _Infeasible
            slack = b - minact
            for i, a in coeffs:
                a *= sign
                if a > 0:
                    new = lo[i] + slack // a
                    if new < hi[i]:
                        hi[i] = new
                    else:
                        continue
                else:
                    new = hi[i] - slack // -a
                    if new > lo[i]:
                        lo[i] = new
                    else:
                        continue
                if lo[i] > hi[i]:
                    raise _Infeasible
                for other in var_rows[i]:
                    if other not in queued:
                        queued.add(other)
                        queue.append(other)


def solve_ip(model: IpModel, node_cap: int | None = None) -> dict[str, int] | None:
    """Return a feasible (and, with an objective, optimal) assignment or None.

    Branching follows declaration order with ascending values, so the first
    feasible assignment found is deterministic.

    Raises:
        CapExceeded: the search visited more than ``node_cap`` nodes.
    """
    limit = node_cap if node_cap is not None else cap_limit(DEFAULT_NODE_CAP)
    nvars = len(model.variables)
    rows = [(row.coeffs, row.sense, row.rhs) for row in model.constraints]
    var_rows: list[list[int]] = [[] for _ in range(nvars)]
    for r, (coeffs, _, _) in enumerate(rows):
        for i, _ in coeffs:
            var_rows[i].append(r)
    lo = [v.lb for v in model.variables]
    hi = [v.ub for v in model.variables]
    # rows without variables are constant checks
    for coeffs, sense, rhs in rows:
        if not coeffs and not Constraint((), sense, rhs).holds([]):
            return None
    objective = sorted((model.objective or {}).items())
    best: list = [None, None]
    nodes = 0

    try:
        _propagate(rows, var_rows, lo, hi, range(len(rows)))
    except _Infeasible:
        return None

    def bound(lo, hi) -> int:
        return sum(c * (hi[i] if c > 0 else lo[i]) for i, c in objective)

    def dfs(lo, hi, start) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > limit:
            raise CapExceeded("integer search nodes", nodes, limit)
        if objective and best[0] is not None and bound(lo, hi) <= best[0]:
            return False
        i = start
        while i < nvars and lo[i] == hi[i]:
            i += 1
        if i == nvars:
            if not model.is_feasible(lo):
                raise AssertionError("propagation accepted an infeasible point")
            value = bound(lo, hi) if objective else 0
            best[0], best[1] = value, list(lo)
            return not objective
        for x in range(lo[i], hi[i] + 1):
            lo2, hi2 = lo[:], hi[:]
            lo2[i] = hi2[i] = x
            try:
                _propagate(rows, var_rows, lo2, hi2, var_rows[i])
            except _Infeasible:
                continue
            if dfs(lo2, hi2, i + 1):
                return True
        return False

    dfs(lo, hi, 0)
    if best[1] is None:
        return None
    return {v.name: x for v, x in zip(model.variables, best[1])}


def enumerate_ip(model: IpModel) -> list[list[int]]:
    """Every feasible assignment, by plain enumeration (small models only)."""
    import itertools

    ranges = [range(v.lb, v.ub + 1) for v in model.variables]
    return [list(values) for values in itertools.product(*ranges) if model.is_feasible(values)]


# --- CPLEX LP format -------------------------------------------------------

def _expr(coeffs, names) -> str:
    parts = []
    for i, c in coeffs:
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        term = names[i] if mag == 1 else f"{mag} {names[i]}"
        parts.append(f"{sign} {term}")
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else text


def export_lp(model: IpModel) -> str:
    """Write ``model`` as CPLEX LP text with Bounds and General sections."""
    names = [v.name for v in model.variables]
    lines = [f"\\Problem name: {model.name}", ""]
    if model.objective:
        lines += ["Maximize", f" obj: {_expr(sorted(model.objective.items()), names)}"]
    else:
        lines += ["Minimize", " obj:"]
    lines.append("Subject To")
    for row in model.constraints:
        coeffs = row.coeffs
        if not coeffs:
            if not names:
                continue
            coeffs = ((0, 0),)
            expr = f"0 {names[0]}"
        else:
            expr = _expr(coeffs, names)
        lines.append(f" {row.name}: {expr} {row.sense} {row.rhs}")
    lines.append("Bounds")
    for v in model.variables:
        lines.append(f" {v.lb} <= {v.name} <= {v.ub}")
    lines.append("General")
    for start in range(0, len(names), 8):
        lines.append(" " + " ".join(names[start:start + 8]))
    lines.append("End")
    return "\n".join(lines) + "\n"


_SECTION = re.compile(r"^\s*(maximize|maximum|max|minimize|minimum|min|subject to|such that|st|s\.t\.|"
                      r"bounds|bound|generals|general|gen|binaries|binary|end)\s*$", re.I)
_TERM = re.compile(r"([+-])?\s*(\d+)?\s*([A-Za-z_][\w.!\"#$%&()/,;?@`'{}|~\[\]]*)")
_REL = re.compile(r"(<=|>=|=<|=>|<|>|=)")


def _parse_expr(text: str) -> list[tuple[str, int]]:
    terms = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        match = _TERM.match(text, pos)
        if not match or match.end() == pos:
            raise ValueError(f"cannot parse LP expression near {text[pos:]!r}")
        sign, coef, name = match.groups()
        value = int(coef) if coef else 1
        terms.append((name, -value if sign == "-" else value))
        pos = match.end()
    return terms


def parse_lp(text: str) -> IpModel:
    """Read CPLEX LP text produced by :func:`export_lp` (integer data only)."""
    section = None
    objective_sense = None
    objective: list[tuple[str, int]] = []
    rows: list[tuple[str, list[tuple[str, int]], str, int]] = []
    bounds: dict[str, tuple[int, int]] = {}
    general: list[str] = []
    name = "model"
    for raw in text.splitlines():
        if raw.startswith("\\Problem name:"):
            name = raw.split(":", 1)[1].strip() or name
        line = raw.split("\\", 1)[0].rstrip()
        if not line.strip():
            continue
        head = _SECTION.match(line)
        if head:
            word = head.group(1).lower()
            if word.startswith("max"):
                section, objective_sense = "obj", "max"
            elif word.startswith("min"):
                section, objective_sense = "obj", "min"
            elif word in ("subject to", "such that", "st", "s.t."):
                section = "rows"
            elif word.startswith("bound"):
                section = "bounds"
            elif word.startswith("gen") or word.startswith("bin"):
                section = "general"
            else:
                section = "end"
            continue
        body = line.strip()
        if section == "obj":
            if ":" in body:
                body = body.split(":", 1)[1]
            objective += _parse_expr(body)
        elif section == "rows":
            label = ""
            if ":" in body:
                label, body = (part.strip() for part in body.split(":", 1))
            lhs, rel, rhs = _REL.split(body, maxsplit=1)
            sense = {"<": "<=", "=<": "<=", ">": ">=", "=>": ">="}.get(rel, rel)
            rows.append((label, _parse_expr(lhs), sense, int(rhs)))
        elif section == "bounds":
            parts = [p.strip() for p in _REL.split(body)]
            if len(parts) == 5:
                bounds[parts[2]] = (int(parts[0]), int(parts[4]))
            elif len(parts) == 3 and parts[1] in ("=",):
                bounds[parts[0]] = (int(parts[2]), int(parts[2]))
            else:
                raise ValueError(f"unsupported bounds line {body!r}")
        elif section == "general":
            general += body.split()
    model = IpModel(name=name)
    declared = list(dict.fromkeys(general + list(bounds)))
    for name in declared:
        lb, ub = bounds.get(name, (0, 0))
        model.add_var(name, lb, ub)
    for label, terms, sense, rhs in rows:
        model.add_constraint([(model.var(n), c) for n, c in terms], sense, rhs, label)
    if objective_sense == "min" and any(c for _, c in objective):
        raise ValueError("only feasibility or maximisation objectives are supported")
    if objective_sense == "max":
        coeffs: dict[int, int] = {}
        for n, c in objective:
            coeffs[model.var(n)] = coeffs.get(model.var(n), 0) + c
        model.maximize(coeffs)
    return model
