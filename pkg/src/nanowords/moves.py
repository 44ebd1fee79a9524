"""Rewrite moves on nanophrases and a bounded equivalence search.

The forward moves are: deletion of an adjacent doubled letter (M1),
deletion of an xAByBAz letter pair (M2), and transposition of three
adjacent pairs xAByACzBCt <-> xBAyCAzCBt (M3 and its mirror M3inv).
M1ins and M2ins insert fresh letters and are the inverses of M1 and M2.
Admissibility is gated by a MoveSystem: M1 needs the letter's symbol in
Q, M2 the ordered symbol pair in R, M3/M3inv the ordered triple in S.

Matched pairs must be strictly adjacent with no component boundary
between them; the surrounding context may span components freely.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    AlphabetMismatch,
    CanonicalForm,
    ConsistencyError,
    NanowordError,
    Nanophrase,
    canonical_form,
)


class StaleSite(NanowordError):
    """The pattern recorded in a move site is no longer present."""


MATCH_KINDS = ("M1", "M2", "M3", "M3inv")
INSERTION_KINDS = ("M1ins", "M2ins")
ALL_KINDS = MATCH_KINDS + INSERTION_KINDS
_KIND_RANK = {kind: i for i, kind in enumerate(ALL_KINDS)}

EQUIVALENT = "equivalent"
NOT_EQUIVALENT = "not_equivalent"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class MoveSite:
    """One admissible application point of a move.

    positions index the concatenated letter sequence (matched sites);
    gaps are (component, offset) slots and symbols the projections of
    the letters to insert (insertion sites).
    """

    kind: str
    positions: tuple = ()
    letters: tuple = ()
    gaps: tuple = ()
    symbols: tuple = ()


def _site_key(site):
    return (_KIND_RANK[site.kind], site.positions, site.gaps, site.symbols)


def find_move_sites(phrase, moves, kinds=None, max_letters=None):
    """All admissible sites of the requested kinds, deterministically ordered.

    Insertion kinds are enumerated only when max_letters leaves room for
    the new letters; with kinds=None they are included exactly when a
    budget is given.
    """
    if moves.alphabet != phrase.alphabet:
        raise AlphabetMismatch("move system and phrase use different alphabets")
    if kinds is None:
        kinds = ALL_KINDS if max_letters is not None else MATCH_KINDS
    wanted = set(kinds)
    flat, comp_of, proj = phrase.flat, phrase.comp_of, phrase.proj
    n = phrase.n_letters
    sites = []
    adj = [p for p in range(len(flat) - 1) if comp_of[p] == comp_of[p + 1]]

    if "M1" in wanted:
        for p in adj:
            if flat[p] == flat[p + 1] and proj[flat[p]] in moves.q:
                sites.append(MoveSite("M1", (p, p + 1), (flat[p],)))

    if "M2" in wanted:
        for ai, i in enumerate(adj):
            a, b = flat[i], flat[i + 1]
            if a == b or (proj[a], proj[b]) not in moves.r:
                continue
            for j in adj[ai + 1:]:
                if j >= i + 2 and flat[j] == b and flat[j + 1] == a:
                    sites.append(MoveSite("M2", (i, i + 1, j, j + 1), (a, b)))

    if "M3" in wanted or "M3inv" in wanted:
        m = len(adj)
        for x in range(m):
            i = adj[x]
            for y in range(x + 1, m):
                j = adj[y]
                if j < i + 2:
                    continue
                for z in range(y + 1, m):
                    l = adj[z]
                    if l < j + 2:
                        continue
                    pos = (i, i + 1, j, j + 1, l, l + 1)
                    if ("M3" in wanted and flat[i] == flat[j]
                            and flat[i + 1] == flat[l] and flat[j + 1] == flat[l + 1]):
                        a, b, c = flat[i], flat[i + 1], flat[j + 1]
                        if (proj[a], proj[b], proj[c]) in moves.s:
                            sites.append(MoveSite("M3", pos, (a, b, c)))
                    if ("M3inv" in wanted and flat[i + 1] == flat[j + 1]
                            and flat[j] == flat[l] and flat[i] == flat[l + 1]):
                        a, b, c = flat[i + 1], flat[i], flat[j]
                        if (proj[a], proj[b], proj[c]) in moves.s:
                            sites.append(MoveSite("M3inv", pos, (a, b, c)))

    if max_letters is not None and wanted & set(INSERTION_KINDS):
        gaps = [(c, o) for c, comp in enumerate(phrase.components)
                for o in range(len(comp) + 1)]
        if "M1ins" in wanted and n + 1 <= max_letters:
            for gap in gaps:
                for sym in sorted(moves.q):
                    sites.append(MoveSite("M1ins", gaps=(gap,), symbols=(sym,)))
        if "M2ins" in wanted and n + 2 <= max_letters:
            for gi in range(len(gaps)):
                for gj in range(gi, len(gaps)):
                    for pair in sorted(moves.r):
                        sites.append(MoveSite("M2ins", gaps=(gaps[gi], gaps[gj]),
                                              symbols=pair))

    sites.sort(key=_site_key)
    return sites


def _check_match(phrase, site, expected):
    pos = site.positions
    flat, comp_of = phrase.flat, phrase.comp_of
    if len(pos) != len(expected) or not pos or pos[-1] >= len(flat):
        raise StaleSite(f"{site.kind} site out of range")
    for t in range(0, len(pos), 2):
        if pos[t + 1] != pos[t] + 1 or comp_of[pos[t]] != comp_of[pos[t + 1]]:
            raise StaleSite(f"{site.kind} site pairs are no longer adjacent")
    if tuple(flat[p] for p in pos) != expected:
        raise StaleSite(f"{site.kind} letters no longer match the site")


def _split_like(phrase, flat):
    comps, start = [], 0
    for comp in phrase.components:
        comps.append(tuple(flat[start:start + len(comp)]))
        start += len(comp)
    return comps


def _fresh_names(existing, count):
    out, i = [], 1
    while len(out) < count:
        name = f"N{i}"
        if name not in existing:
            out.append(name)
        i += 1
    return out


def apply_move(phrase, site):
    """Apply a site to a phrase, revalidating the matched pattern.

    Matched kinds recheck adjacency and the letters at the recorded
    positions (StaleSite otherwise); symbol gating is the finder's job.
    """
    kind = site.kind
    if kind == "M1":
        (a,) = site.letters
        _check_match(phrase, site, (a, a))
        return _delete(phrase, site.positions, (a,))
    if kind == "M2":
        a, b = site.letters
        _check_match(phrase, site, (a, b, b, a))
        return _delete(phrase, site.positions, (a, b))
    if kind in ("M3", "M3inv"):
        a, b, c = site.letters
        expected = (a, b, a, c, b, c) if kind == "M3" else (b, a, c, a, c, b)
        _check_match(phrase, site, expected)
        flat = list(phrase.flat)
        for t in range(0, 6, 2):
            p = site.positions[t]
            flat[p], flat[p + 1] = flat[p + 1], flat[p]
        return Nanophrase(phrase.alphabet, _split_like(phrase, flat), phrase.proj,
                          validate=False)
    if kind == "M1ins":
        (gap,) = site.gaps
        (sym,) = site.symbols
        _check_insertion(phrase, (gap,), (sym,))
        (name,) = _fresh_names(set(phrase.letters), 1)
        comps = list(phrase.components)
        c, o = gap
        comps[c] = comps[c][:o] + (name, name) + comps[c][o:]
        proj = dict(phrase.proj)
        proj[name] = sym
        return Nanophrase(phrase.alphabet, comps, proj, validate=False)
    if kind == "M2ins":
        gap1, gap2 = site.gaps
        s1, s2 = site.symbols
        if gap2 < gap1:
            raise StaleSite("M2ins gaps out of order")
        _check_insertion(phrase, site.gaps, site.symbols)
        na, nb = _fresh_names(set(phrase.letters), 2)
        comps = list(phrase.components)
        (c2, o2) = gap2
        comps[c2] = comps[c2][:o2] + (nb, na) + comps[c2][o2:]
        (c1, o1) = gap1
        comps[c1] = comps[c1][:o1] + (na, nb) + comps[c1][o1:]
        proj = dict(phrase.proj)
        proj[na], proj[nb] = s1, s2
        return Nanophrase(phrase.alphabet, comps, proj, validate=False)
    raise NanowordError(f"unknown move kind {kind!r}")


def _check_insertion(phrase, gaps, symbols):
    for (c, o) in gaps:
        if not (0 <= c < phrase.k and 0 <= o <= len(phrase.components[c])):
            raise StaleSite("insertion gap out of range")
    unknown = [s for s in symbols if s not in phrase.alphabet]
    if unknown:
        raise StaleSite(f"insertion symbols not in the alphabet: {unknown}")


def _delete(phrase, positions, letters):
    drop = set(positions)
    flat = [ltr for p, ltr in enumerate(phrase.flat) if p not in drop]
    comps, start = [], 0
    for c, comp in enumerate(phrase.components):
        size = len(comp) - sum(1 for p in drop if phrase.comp_of[p] == c)
        comps.append(tuple(flat[start:start + size]))
        start += size
    proj = {ltr: sym for ltr, sym in phrase.proj.items() if ltr not in letters}
    return Nanophrase(phrase.alphabet, comps, proj, validate=False)


@dataclass(frozen=True)
class PathStep:
    """One replayable step: a site on the previous canonical form."""

    site: MoveSite
    result: CanonicalForm

    def describe(self, index):
        names = ",".join(self.site.letters or self.site.symbols) or "-"
        return f"{index}\t{self.site.kind}\t{names}\t{self.result}"


@dataclass(frozen=True)
class Verdict:
    status: str
    path: tuple = None
    explored: int = 0
    reason: str = ""

    @property
    def is_equivalent(self):
        return self.status == EQUIVALENT


def replay_path(start, path, alphabet):
    """Re-apply every step from a canonical form; return the final form.

    Raises ConsistencyError when any step fails to reproduce its recorded
    result.
    """
    current = start if isinstance(start, CanonicalForm) else canonical_form(start)
    for step in path:
        result = canonical_form(apply_move(current.to_phrase(alphabet), step.site))
        if result != step.result:
            raise ConsistencyError(
                f"replay diverged at {step.site.kind}: {result} != {step.result}")
        current = step.result
    return current


class NeighborCache:
    """Memoized neighbor expansion for one move system.

    Neighbors are cached without a letter budget (insertions included up
    to n+2) and filtered by budget at lookup, so one cache can back
    several searches over the same system.
    """

    def __init__(self, moves):
        self.moves = moves
        self._table = {}

    def raw(self, form):
        got = self._table.get(form)
        if got is None:
            phrase = form.to_phrase(self.moves.alphabet)
            got = tuple(
                (site, canonical_form(apply_move(phrase, site)))
                for site in find_move_sites(phrase, self.moves, ALL_KINDS,
                                            phrase.n_letters + 2))
            self._table[form] = got
        return got

    def within(self, form, max_letters):
        return [(site, child) for site, child in self.raw(form)
                if child.n_letters <= max_letters]


def equivalent(phrase1, phrase2, moves, max_letters, max_states,
               neighbor_cache=None):
    """Decide relatedness by moves, bidirectionally, within budgets.

    Returns a Verdict: EQUIVALENT with a replayable path, NOT_EQUIVALENT
    when a reachable set was exhausted inside the budget without meeting
    the other side, or UNKNOWN when max_states was hit first.
    """
    if phrase1.alphabet != phrase2.alphabet or moves.alphabet != phrase1.alphabet:
        raise AlphabetMismatch("equivalence needs a single shared alphabet")
    if max_letters < max(phrase1.n_letters, phrase2.n_letters):
        raise ValueError("max_letters must cover both input phrases")
    if phrase1.k != phrase2.k:
        return Verdict(NOT_EQUIVALENT, reason="component counts differ")
    c1, c2 = canonical_form(phrase1), canonical_form(phrase2)
    if c1 == c2:
        return Verdict(EQUIVALENT, path=(), explored=1, reason="isomorphic")

    cache = neighbor_cache if neighbor_cache is not None else NeighborCache(moves)
    if cache.moves != moves:
        raise ValueError("neighbor cache was built for a different move system")
    visited = ({c1: (None, None)}, {c2: (None, None)})
    frontiers = [[c1], [c2]]
    explored = 2
    meet = None

    while frontiers[0] and frontiers[1]:
        side = 0 if len(frontiers[0]) <= len(frontiers[1]) else 1
        here, there = visited[side], visited[1 - side]
        fresh = []
        for form in frontiers[side]:
            for site, child in cache.within(form, max_letters):
                if child in here:
                    continue
                here[child] = (form, site)
                explored += 1
                if child in there:
                    meet = child
                    break
                if explored > max_states:
                    return Verdict(UNKNOWN, explored=explored,
                                   reason=f"state budget {max_states} exhausted")
                fresh.append(child)
            if meet is not None:
                break
        if meet is not None:
            break
        frontiers[side] = fresh
    else:
        closed = 1 if frontiers[0] else 0
        return Verdict(
            NOT_EQUIVALENT, explored=explored,
            reason=f"reachable set of side {closed + 1} closed under the budget")

    path = _assemble_path(visited, meet, cache, max_letters)
    final = replay_path(c1, path, phrase1.alphabet)
    if final != c2:
        raise ConsistencyError("assembled path does not end at the target")
    return Verdict(EQUIVALENT, path=path, explored=explored,
                   reason=f"met after exploring {explored} states")


def _chain(visited_map, form):
    steps = []
    current = form
    while True:
        parent, site = visited_map[current]
        if parent is None:
            break
        steps.append((parent, site, current))
        current = parent
    steps.reverse()
    return steps


def _assemble_path(visited, meet, cache, max_letters):
    steps = list(_chain(visited[0], meet))
    for parent, _site, child in reversed(_chain(visited[1], meet)):
        # The recorded edge runs parent -> child; walking meet -> start
        # of side 2 needs child -> parent, found by scanning neighbors.
        for site, result in cache.within(child, max_letters):
            if result == parent:
                steps.append((child, site, parent))
                break
        else:
            raise ConsistencyError("no inverse move found while assembling a path")
    return tuple(PathStep(site, child) for _parent, site, child in steps)
