"""Seedable instance generators: random model B, clique-embedded randoms,
crosswords, parity chains, frequency-assignment-like and configuration-like
problems.

Every generator is a pure function of its parameters and seed. Randomness
comes from Python's Mersenne Twister (random.Random) seeded explicitly;
"uniform without replacement" draws are shuffle-prefixes of the enumerated
candidate list, so instances are reproducible across platforms.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import CapacityError, Constraint, Predicate, Problem
from .words import WORDS

SCOPE_ENUM_BUDGET = 2_000_000
TUPLE_ENUM_BUDGET = 500_000
CONNECT_RETRIES = 1000


def _round_half_up(v: float) -> int:
    return math.floor(v + 0.5)


def _connected(n: int, scopes: Sequence[Sequence[int]]) -> bool:
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for scope in scopes:
        for x in scope[1:]:
            ra, rb = find(scope[0]), find(x)
            if ra != rb:
                parent[rb] = ra
    roots = {find(x) for x in range(n)}
    return len(roots) == 1


def is_connected(problem: Problem) -> bool:
    return _connected(problem.n, [c.scope for c in problem.constraints])


# ---------------------------------------------------------------------------
# extended model B


@dataclass(frozen=True)
class ModelBParams:
    """<n, d, k, p, q>: variable count, uniform domain size, uniform arity,
    density percent of the C(n,k) possible scopes, looseness percent of the
    d^k tuples."""

    n: int
    d: int
    k: int
    p: float
    q: float
    seed: int = 0

    def constraint_count(self) -> int:
        return _round_half_up(self.p / 100.0 * math.comb(self.n, self.k))

    def tuples_per_constraint(self) -> int:
        return _round_half_up(self.q / 100.0 * self.d ** self.k)


def _draw_relation(rng: random.Random, all_tuples: list, t: int) -> list:
    pick = list(all_tuples)
    rng.shuffle(pick)
    return sorted(pick[:t])


def gen_model_b(params: ModelBParams) -> Problem:
    """Uniform random instance: distinct scopes, distinct allowed tuples,
    regenerated until the constraint hypergraph is connected."""
    n, d, k = params.n, params.d, params.k
    if not (0 < params.p <= 100 and 0 < params.q <= 100):
        raise ValueError("p and q are percentages in (0, 100]")
    if k > n or k < 1 or d < 1:
        raise ValueError("need 1 <= k <= n and d >= 1")
    m = params.constraint_count()
    t = params.tuples_per_constraint()
    if m < 1 or t < 1:
        raise ValueError(f"degenerate instance: {m} constraints, {t} tuples each")
    if m * (k - 1) < n - 1:
        raise ValueError(f"{m} constraints of arity {k} cannot connect {n} variables")
    if math.comb(n, k) > SCOPE_ENUM_BUDGET:
        raise CapacityError(f"C({n},{k}) scopes exceed the enumeration budget")
    if d ** k > TUPLE_ENUM_BUDGET:
        raise CapacityError(f"{d}^{k} tuples exceed the enumeration budget")

    all_scopes = list(itertools.combinations(range(n), k))
    all_tuples = list(itertools.product(range(d), repeat=k))
    rng = random.Random(params.seed)
    for _ in range(CONNECT_RETRIES):
        scopes = list(all_scopes)
        rng.shuffle(scopes)
        scopes = scopes[:m]
        if not _connected(n, scopes):
            continue
        constraints = [Constraint(scope, relation=_draw_relation(rng, all_tuples, t),
                                  name=f"c{i + 1}")
                       for i, scope in enumerate(scopes)]
        return Problem([f"x{i + 1}" for i in range(n)],
                       [list(range(d))] * n, constraints,
                       name=f"modelb<{n},{d},{k},{params.p},{params.q}>#{params.seed}")
    raise ValueError(f"no connected scope set found in {CONNECT_RETRIES} attempts")


def gen_clique_embedded(base: ModelBParams, clique_size: int,
                        seed: Optional[int] = None) -> Problem:
    """Model B instance with an embedded clique: clique_size variables whose
    constraints all share a hub variable, so any two of them overlap in one
    or more variables (how many extra is random)."""
    if clique_size == 0:
        return gen_model_b(base)
    n, d, k = base.n, base.d, base.k
    if clique_size < k or clique_size > n:
        raise ValueError(f"clique size must lie in [{k}, {n}]")
    rng = random.Random(seed if seed is not None else base.seed)
    t = base.tuples_per_constraint()
    all_tuples = list(itertools.product(range(d), repeat=k))

    base_problem = gen_model_b(base if seed is None else
                               ModelBParams(n, d, k, base.p, base.q, seed))
    vars_shuffled = list(range(n))
    rng.shuffle(vars_shuffled)
    clique_vars = vars_shuffled[:clique_size]
    hub, rest = clique_vars[0], clique_vars[1:]

    scopes = set(c.scope for c in base_problem.constraints)
    clique_scopes = []

    def add_scope(members):
        scope = tuple(sorted(members))
        if scope not in scopes:
            scopes.add(scope)
            clique_scopes.append(scope)

    rng.shuffle(rest)
    for i in range(0, len(rest), k - 1):
        chunk = rest[i:i + k - 1]
        while len(chunk) < k - 1:
            extra = rng.choice(rest)
            if extra not in chunk and extra != hub:
                chunk.append(extra)
        add_scope([hub] + chunk)
    guard = 0
    while len(clique_scopes) < clique_size and guard < 50 * clique_size:
        add_scope([hub] + rng.sample(rest, k - 1))
        guard += 1

    constraints = list(base_problem.constraints)
    for i, scope in enumerate(clique_scopes):
        constraints.append(Constraint(scope, relation=_draw_relation(rng, all_tuples, t),
                                      name=f"clq{i + 1}"))
    return Problem(base_problem.variables, base_problem.domains, constraints,
                   name=base_problem.name + f"+clique{clique_size}")


# ---------------------------------------------------------------------------
# crosswords


LETTERS = tuple("abcdefghijklmnopqrstuvwxyz")


@dataclass(frozen=True)
class CrosswordSpec:
    """A rectangular grid ('.' open cell, '#' blocked) and a dictionary.

    Every maximal horizontal or vertical run of two or more open cells is a
    word slot; the non-binary model has one letter variable per open cell
    and one constraint per slot allowing the dictionary's words of that
    length.
    """

    grid: tuple
    dictionary: tuple

    @classmethod
    def blank(cls, rows: int, cols: int, dictionary: Sequence[str] = WORDS):
        return cls(tuple("." * cols for _ in range(rows)), tuple(dictionary))


def _slots(grid: Sequence[str]) -> list:
    rows, cols = len(grid), len(grid[0]) if grid else 0
    slots = []

    def runs(cells):
        run = []
        for cell in cells:
            if cell is None:
                if len(run) >= 2:
                    slots.append(run)
                run = []
            else:
                run.append(cell)
        if len(run) >= 2:
            slots.append(run)

    for r in range(rows):
        runs([(r, c) if grid[r][c] == "." else None for c in range(cols)])
    for c in range(cols):
        runs([(r, c) if grid[r][c] == "." else None for r in range(rows)])
    return slots


def gen_crossword(spec: CrosswordSpec) -> Problem:
    """Letter-variable model of a crossword grid: one variable per open cell
    (domain a..z), one extensional constraint per slot whose relation is the
    dictionary's words of that length. A slot length absent from the
    dictionary yields an empty relation (the instance is then insoluble)."""
    for row in spec.grid:
        if len(row) != len(spec.grid[0]):
            raise ValueError("grid rows must have equal length")
        if any(ch not in ".#" for ch in row):
            raise ValueError("grid cells are '.' (open) or '#' (blocked)")
    cells = [(r, c) for r, row in enumerate(spec.grid)
             for c, ch in enumerate(row) if ch == "."]
    index = {cell: i for i, cell in enumerate(cells)}
    by_length: dict = {}
    for w in spec.dictionary:
        if w.isalpha() and w.islower():
            by_length.setdefault(len(w), set()).add(w)
    letter_index = {ch: i for i, ch in enumerate(LETTERS)}

    constraints = []
    for si, slot in enumerate(_slots(spec.grid)):
        words = sorted(by_length.get(len(slot), ()))
        relation = sorted(tuple(letter_index[ch] for ch in w) for w in words)
        constraints.append(Constraint([index[cell] for cell in slot],
                                      relation=relation, name=f"slot{si + 1}"))
    return Problem([f"r{r}c{c}" for (r, c) in cells],
                   [list(LETTERS)] * len(cells), constraints,
                   name=f"crossword{len(spec.grid)}x{len(spec.grid[0]) if spec.grid else 0}")


def crossword_solution_words(problem: Problem, assignment: Sequence[int]) -> list:
    """Decode a solution back to one word per slot."""
    out = []
    for c in problem.constraints:
        out.append("".join(LETTERS[assignment[x]] for x in c.scope))
    return out


# ---------------------------------------------------------------------------
# parity chains (adversarial family)


def gen_parity_chain(n: int) -> Problem:
    """4n+2 variables with domains {1..n} and a cycle of 2n+1 constraints
    (x_{2i-1}+x_{2i} mod 2) != (x_{2i+1}+x_{2i+2} mod 2); the odd cycle
    length makes every instance insoluble."""
    if n < 1:
        raise ValueError("n >= 1")
    nvars = 4 * n + 2
    labels = list(range(1, n + 1))
    constraints = []
    for i in range(1, 2 * n + 2):
        lo = 2 * i - 2  # 0-based index of x_{2i-1}
        scope = [lo % nvars, (lo + 1) % nvars, (lo + 2) % nvars, (lo + 3) % nvars]
        constraints.append(Constraint(
            scope, predicate=Predicate("parity_neq", pairs=((0, 1), (2, 3))),
            name=f"c{i}"))
    return Problem([f"x{i + 1}" for i in range(nvars)], [labels] * nvars,
                   constraints, name=f"parity_chain{n}")


# ---------------------------------------------------------------------------
# frequency-assignment-like instances


RLFA_TOPOLOGIES = {
    # groups: variable counts; per_group: constraints per group;
    # max_arity; links: inter-group constraints
    "prob1": {"groups": [10, 10, 10, 9, 9], "per_group": 4, "max_arity": 4, "links": 5},
    "prob2": {"groups": [9, 9, 9, 9, 8], "per_group": 3, "max_arity": 4, "links": 6},
    "prob3": {"groups": [11, 11, 11, 11, 10], "per_group": 4, "max_arity": 5, "links": 4},
    "prob4": {"groups": [23, 23, 22], "per_group": 11, "max_arity": 5, "links": 5},
    "prob5": {"groups": None, "per_group": None, "max_arity": 5, "links": None},
}


def _separation_feasible_s(d: int, arity: int) -> int:
    """Largest s with a non-empty separation relation: pairwise gaps exceed
    s, so the spread of `arity` values needs (arity-1)(s+1) <= d-1."""
    return (d - 1) // (arity - 1) - 1


def _rlfa_constraint(rng: random.Random, scope: list, d: int,
                     name: str) -> Constraint:
    arity = len(scope)
    s_max = _separation_feasible_s(d, arity)
    s_lo = max(1, s_max - 2)  # keep the constraints from being very loose
    if rng.random() < 0.3 and s_max - s_lo >= 1:
        s = rng.randint(s_lo, s_max - 1)
        s2 = rng.randint(s + 1, s_max)
        subset = tuple(sorted(rng.sample(range(arity), max(1, arity // 2))))
        pred = Predicate("rich_separation", s=s, s2=s2, subset=subset)
    else:
        pred = Predicate("separation", s=rng.randint(s_lo, s_max))
    return Constraint(sorted(scope), predicate=pred, name=name)


def _group_scopes(rng: random.Random, members: list, per_group: int,
                  max_arity: int) -> list:
    """Scopes for one group: a cover pass touching every member, then random
    extras up to the requested count."""
    order = list(members)
    rng.shuffle(order)
    scopes, i = [], 0
    while i < len(order) - 1:
        arity = rng.randint(3, min(max_arity, len(members)))
        chunk = order[i:i + arity]
        while len(chunk) < 3:  # pad a short tail chunk from earlier members
            chunk.append(order[i - len(chunk)])
        scopes.append(chunk)
        i += arity - 1  # consecutive chunks overlap: the group stays connected
    seen = {tuple(sorted(s)) for s in scopes}
    guard = 0
    while len(scopes) < per_group and guard < 50 * per_group:
        arity = rng.randint(3, min(max_arity, len(members)))
        scope = rng.sample(members, arity)
        if tuple(sorted(scope)) not in seen:
            seen.add(tuple(sorted(scope)))
            scopes.append(scope)
        guard += 1
    return scopes


def gen_rlfa(topology: str = "prob1", domain_size: int = 20, seed: int = 0,
             adjacent8: bool = False, co_channel: bool = False) -> Problem:
    """Radio-link-frequency-like instance: groups of closely situated
    variables carrying 3..5-ary separation constraints (s picked near the
    tight end of the feasible range), a few constraints linking neighbouring
    groups, and optionally loose 8-ary adjacent-channel (separation s=1) and
    not-all-equal constraints across distant groups. Those 8-ary constraints
    stay intensional: expanding them is exactly the memory blow-up the
    hybrid model avoids."""
    if topology not in RLFA_TOPOLOGIES:
        raise ValueError(f"unknown topology {topology!r}; "
                         f"known: {', '.join(sorted(RLFA_TOPOLOGIES))}")
    if domain_size not in (20, 25):
        raise ValueError("frequency domains are 20 or 25 values")
    cfg = RLFA_TOPOLOGIES[topology]
    rng = random.Random(seed)

    if cfg["groups"] is None:  # prob5: random groups of 8..10 vars up to ~100
        groups, total = [], 0
        while total < 100:
            g = min(rng.randint(8, 10), 100 - total)
            if g < 8 and groups:
                groups[-1] += g
            else:
                groups.append(g)
            total += g
    else:
        groups = list(cfg["groups"])

    members, start = [], 0
    for g in groups:
        members.append(list(range(start, start + g)))
        start += g
    n = start

    constraints = []
    for gi, mem in enumerate(members):
        per = cfg["per_group"] if cfg["per_group"] is not None else rng.randint(3, 5)
        for ci, scope in enumerate(_group_scopes(rng, mem, per, cfg["max_arity"])):
            constraints.append(_rlfa_constraint(rng, scope, domain_size,
                                                f"g{gi + 1}_{ci + 1}"))
    links = cfg["links"] if cfg["links"] is not None else len(groups)
    links = max(links, len(groups) - 1)  # the group chain must close
    for li in range(links):
        gi = li % (len(groups) - 1)
        a = rng.choice(members[gi])
        b = rng.choice(members[gi + 1])
        constraints.append(Constraint(sorted((a, b)),
                                      predicate=Predicate("separation", s=rng.randint(1, 2)),
                                      name=f"link{li + 1}"))
    if adjacent8:
        for ai in range(4):
            far = [rng.choice(members[gi]) for gi in
                   rng.sample(range(len(groups)), min(4, len(groups)))]
            pool = sorted(set(far))
            while len(pool) < 8:
                cand = rng.randrange(n)
                if cand not in pool:
                    pool.append(cand)
            constraints.append(Constraint(sorted(pool[:8]),
                                          predicate=Predicate("separation", s=1),
                                          name=f"adj{ai + 1}"))
    if co_channel:
        for ci in range(2):
            pool = rng.sample(range(n), 5)
            constraints.append(Constraint(sorted(pool),
                                          predicate=Predicate("not_all_equal"),
                                          name=f"coch{ci + 1}"))

    problem = Problem([f"f{i + 1}" for i in range(n)],
                      [list(range(domain_size))] * n, constraints,
                      name=f"rlfa_{topology}_d{domain_size}#{seed}")
    assert is_connected(problem)  # the cover pass plus the link chain
    return problem


# ---------------------------------------------------------------------------
# configuration-like instances


def tshirt_problem() -> Problem:
    """The t-shirt configuration toy: size/print/colour with two binary
    compatibility constraints."""
    variables = ["size", "print", "colour"]
    domains = [["small", "medium", "large"], ["MIB", "STW"],
               ["black", "white", "red"]]
    c1 = Constraint((0, 1), relation=[(0, 0), (1, 0), (1, 1), (2, 0), (2, 1)],
                    name="size_print")
    c2 = Constraint((1, 2), relation=[(0, 0), (1, 1), (1, 2)], name="print_colour")
    return Problem(variables, domains, [c1, c2], name="tshirt")


def gen_config_like(base: Optional[Problem] = None, extra_vars: int = 6,
                    min_constraints: int = 8, max_constraints: int = 10,
                    seed: int = 0) -> Problem:
    """Configuration-like instance: a (possibly disconnected) base problem
    extended with extra variables and random constraints of arity 2..4 and
    random looseness, redrawn until the constraint graph is connected."""
    if base is None:
        base = tshirt_problem()
    if extra_vars == 0 and max_constraints == 0:
        return base
    rng = random.Random(seed)
    sizes = [base.domain_size(x) for x in range(base.n)]
    variables = list(base.variables)
    domains = [list(d) for d in base.domains]
    for i in range(extra_vars):
        size = rng.choice(sizes) if sizes else 3
        variables.append(f"e{i + 1}")
        domains.append(list(range(size)))
    n = len(variables)

    for _ in range(CONNECT_RETRIES):
        count = rng.randint(min_constraints, max_constraints)
        extra = []
        for ci in range(count):
            arity = rng.choice([2, 3, 4])
            arity = min(arity, n)
            scope = sorted(rng.sample(range(n), arity))
            space = 1
            for x in scope:
                space *= len(domains[x])
            if space > TUPLE_ENUM_BUDGET:
                raise CapacityError("configuration constraint space too large")
            all_tuples = list(itertools.product(*(range(len(domains[x]))
                                                  for x in scope)))
            looseness = rng.uniform(0.25, 0.7)
            t = max(1, _round_half_up(looseness * space))
            extra.append(Constraint(scope, relation=_draw_relation(rng, all_tuples, t),
                                    name=f"add{ci + 1}"))
        scopes = [c.scope for c in base.constraints] + [c.scope for c in extra]
        if _connected(n, scopes):
            return Problem(variables, domains, list(base.constraints) + extra,
                           name=(base.name or "config") + f"+ext#{seed}")
    raise ValueError("could not connect the configuration instance")
