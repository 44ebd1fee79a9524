"""Alphabets with involution, nanophrases, canonical forms, enumeration.

A nanophrase is a sequence of component words over a letter set in which
every letter occurs exactly twice overall, together with a projection of
letters into a base alphabet carrying an involution.  Two nanophrases
are isomorphic when a letter bijection preserves the projections and the
word structure; this is decided by relabeling letters 1..n in order of
first occurrence and comparing the results.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass


class NanowordError(Exception):
    """Base class for domain errors raised by this package."""


class ConsistencyError(Exception):
    """An internal cross-check failed (never a user-input problem)."""


class LetterCountError(NanowordError):
    """Some letter does not occur exactly twice."""

    def __init__(self, counts):
        self.counts = dict(counts)
        detail = ", ".join(f"{ltr}: {c} != 2" for ltr, c in sorted(self.counts.items()))
        super().__init__(f"every letter must occur exactly twice ({detail})")


class UnknownSymbol(NanowordError):
    """A projection or move-system member references an unknown symbol."""

    def __init__(self, items, where="projection"):
        self.items = sorted(str(i) for i in items)
        super().__init__(f"unknown symbols in {where}: {', '.join(self.items)}")


class AlphabetMismatch(NanowordError):
    """Operands do not share the same alphabet."""


class Alphabet:
    """A finite symbol set together with an involution tau.

    The orbits of tau are kept in a canonical order: free orbits
    (size two) come first, fixed points last, each run sorted by its
    representative.  The representative of a free orbit is its
    lexicographically smaller member.  Orbit indices are 1-based:
    1..n_free are free, n_free+1..n_free+n_fixed are fixed points.
    """

    __slots__ = ("symbols", "orbits", "representatives", "n_free", "n_fixed",
                 "_tau", "_orbit_index", "_key", "_hash")

    def __init__(self, symbols, tau=None):
        symbols = tuple(symbols)
        if len(set(symbols)) != len(symbols):
            raise NanowordError("alphabet symbols must be distinct")
        mapping = {}
        for x, y in dict(tau or {}).items():
            for a, b in ((x, y), (y, x)):
                if mapping.setdefault(a, b) != b:
                    raise NanowordError(f"conflicting tau assignments for {a!r}")
        unknown = set(mapping) - set(symbols)
        if unknown:
            raise UnknownSymbol(unknown, where="tau")
        full = {s: mapping.get(s, s) for s in symbols}
        for s in symbols:
            if full[full[s]] != s:
                raise NanowordError(f"tau is not an involution at {s!r}")
        self.symbols = symbols
        self._tau = full

        free, fixed, seen = [], [], set()
        for s in sorted(symbols):
            if s in seen:
                continue
            t = full[s]
            if t == s:
                fixed.append((s,))
            else:
                free.append((min(s, t), max(s, t)))
            seen.update((s, t))
        free.sort()
        fixed.sort()
        self.orbits = tuple(free) + tuple(fixed)
        self.representatives = tuple(o[0] for o in self.orbits)
        self.n_free = len(free)
        self.n_fixed = len(fixed)
        self._orbit_index = {s: i + 1 for i, orbit in enumerate(self.orbits) for s in orbit}
        self._key = (symbols, tuple(sorted(full.items())))
        self._hash = hash(self._key)

    def tau(self, symbol):
        return self._tau[symbol]

    def tau_pairs(self):
        """Free orbits as (representative, partner) pairs, canonical order."""
        return tuple(o for o in self.orbits if len(o) == 2)

    def orbit_index(self, symbol):
        """1-based canonical orbit index of a symbol."""
        return self._orbit_index[symbol]

    def is_free_orbit(self, index):
        return 1 <= index <= self.n_free

    def representative(self, index):
        return self.representatives[index - 1]

    def epsilon(self, symbol):
        """+1 on orbit representatives and fixed points, -1 otherwise."""
        orbit = self.orbits[self._orbit_index[symbol] - 1]
        return 1 if len(orbit) == 1 or symbol == orbit[0] else -1

    def __contains__(self, symbol):
        return symbol in self._tau

    def __len__(self):
        return len(self.symbols)

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Alphabet({list(self.symbols)!r})"


class MoveSystem:
    """The data (Q, R, S) gating the three rewrite moves.

    Q is a symbol subset (doubled-letter deletion), R a set of ordered
    symbol pairs (interlocked-pair deletion), S a set of ordered symbol
    triples (triple transposition).  The classical setting takes
    Q = alphabet and R = the graph of tau.
    """

    __slots__ = ("alphabet", "q", "r", "s", "r_is_graph_of_tau")

    def __init__(self, alphabet, q=(), r=(), s=()):
        self.alphabet = alphabet
        self.q = frozenset(q)
        self.r = frozenset(tuple(p) for p in r)
        self.s = frozenset(tuple(t) for t in s)
        if any(len(p) != 2 for p in self.r) or any(len(t) != 3 for t in self.s):
            raise NanowordError("R members must be pairs and S members triples")
        referenced = set(self.q)
        referenced.update(x for p in self.r for x in p)
        referenced.update(x for t in self.s for x in t)
        unknown = {x for x in referenced if x not in alphabet}
        if unknown:
            raise UnknownSymbol(unknown, where="move system")
        graph = frozenset((x, alphabet.tau(x)) for x in alphabet.symbols)
        self.r_is_graph_of_tau = self.r == graph

    @property
    def s_is_sub_diagonal(self):
        return all(t[0] == t[1] == t[2] for t in self.s)

    @classmethod
    def standard(cls, alphabet, s):
        """Q = whole alphabet, R = graph of tau, with the given S."""
        graph = [(x, alphabet.tau(x)) for x in alphabet.symbols]
        return cls(alphabet, q=alphabet.symbols, r=graph, s=s)

    def __eq__(self, other):
        return (isinstance(other, MoveSystem)
                and self.alphabet == other.alphabet
                and self.q == other.q and self.r == other.r and self.s == other.s)

    def __hash__(self):
        return hash((self.alphabet, self.q, self.r, self.s))

    def __repr__(self):
        return f"MoveSystem(q={sorted(self.q)}, r={sorted(self.r)}, s={sorted(self.s)})"


class Nanophrase:
    """k component words whose concatenation uses every letter twice.

    Values are immutable after construction; all operations on them are
    pure functions returning new phrases.
    """

    __slots__ = ("alphabet", "components", "proj", "letters", "flat", "comp_of", "_occ")

    def __init__(self, alphabet, components, proj, validate=True):
        components = tuple(tuple(comp) for comp in components)
        if not components:
            raise NanowordError("a phrase needs at least one component")
        flat = tuple(itertools.chain.from_iterable(components))
        if validate:
            counts = Counter(flat)
            bad = {ltr: c for ltr, c in counts.items() if c != 2}
            if bad:
                raise LetterCountError(bad)
            problems = [f"{ltr}=?" for ltr in counts if ltr not in proj]
            problems += [f"{ltr}={proj[ltr]}" for ltr in counts
                         if ltr in proj and proj[ltr] not in alphabet]
            if problems:
                raise UnknownSymbol(problems, where="projection")
        self.alphabet = alphabet
        self.components = components
        self.flat = flat
        self.comp_of = tuple(c for c, comp in enumerate(components) for _ in comp)
        letters, occ = [], {}
        for pos, ltr in enumerate(flat):
            if ltr in occ:
                occ[ltr] = (occ[ltr][0], pos)
            else:
                occ[ltr] = (pos, pos)
                letters.append(ltr)
        self.letters = tuple(letters)
        self._occ = occ
        self.proj = {ltr: proj[ltr] for ltr in letters}

    @property
    def k(self):
        return len(self.components)

    @property
    def n_letters(self):
        return len(self.letters)

    def occurrences(self, letter):
        """The two positions of a letter in the concatenation."""
        return self._occ[letter]

    def component_pair(self, letter):
        """1-based component indices of the two occurrences, ascending."""
        p1, p2 = self._occ[letter]
        return (self.comp_of[p1] + 1, self.comp_of[p2] + 1)

    def is_single_component(self, letter):
        c1, c2 = self.component_pair(letter)
        return c1 == c2

    def __repr__(self):
        body = " | ".join(" ".join(comp) for comp in self.components)
        return f"Nanophrase({body!r})"


@dataclass(frozen=True)
class CanonicalForm:
    """Letters replaced by 1..n in order of first occurrence.

    Two nanophrases over the same alphabet are isomorphic exactly when
    their canonical forms are equal.
    """

    pattern: tuple
    proj_seq: tuple

    @property
    def n_letters(self):
        return len(self.proj_seq)

    @property
    def k(self):
        return len(self.pattern)

    def serialize(self):
        tokens = []
        for idx, comp in enumerate(self.pattern):
            if idx:
                tokens.append("|")
            tokens.extend(str(r) for r in comp)
        return f'{" ".join(tokens)} ; {" ".join(self.proj_seq)}'.strip()

    def to_phrase(self, alphabet):
        """Materialize the canonical representative over an alphabet."""
        components = tuple(tuple(rank_letter(r) for r in comp) for comp in self.pattern)
        proj = {rank_letter(i + 1): sym for i, sym in enumerate(self.proj_seq)}
        return Nanophrase(alphabet, components, proj, validate=False)

    def __str__(self):
        return self.serialize()


def rank_letter(rank):
    """Canonical letter name for a 1-based first-occurrence rank."""
    return chr(64 + rank) if rank <= 26 else f"L{rank}"


def canonical_form(phrase):
    """Relabel letters by first occurrence; preserves boundaries and projections."""
    rank = {}
    for ltr in phrase.flat:
        if ltr not in rank:
            rank[ltr] = len(rank) + 1
    pattern = tuple(tuple(rank[ltr] for ltr in comp) for comp in phrase.components)
    order = sorted(rank, key=rank.get)
    proj_seq = tuple(phrase.proj[ltr] for ltr in order)
    return CanonicalForm(pattern, proj_seq)


def validate_nanophrase(alphabet, components, proj):
    """Build a nanophrase, reporting every violating letter on failure."""
    return Nanophrase(alphabet, components, proj, validate=True)


def are_isomorphic(phrase1, phrase2):
    if phrase1.alphabet != phrase2.alphabet:
        raise AlphabetMismatch("phrases live over different alphabets")
    return canonical_form(phrase1) == canonical_form(phrase2)


def _double_occurrence_patterns(n):
    # Rank sequences of length 2n, each rank twice, first occurrences in
    # increasing order; emitted in lexicographic order.
    seq = []

    def rec(open_ranks, next_rank):
        if len(seq) == 2 * n:
            yield tuple(seq)
            return
        remaining = 2 * n - len(seq)
        for r in sorted(open_ranks):
            seq.append(r)
            open_ranks.remove(r)
            yield from rec(open_ranks, next_rank)
            open_ranks.add(r)
            seq.pop()
        if next_rank <= n and len(open_ranks) <= remaining - 2:
            seq.append(next_rank)
            open_ranks.add(next_rank)
            yield from rec(open_ranks, next_rank + 1)
            open_ranks.remove(next_rank)
            seq.pop()

    yield from rec(set(), 1)


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_nanophrases(alphabet, n_letters, k):
    """One canonical representative per isomorphism class.

    Streams every double-occurrence pattern on n_letters letters,
    distributed over k ordered components, crossed with every projection
    assignment, in a fixed deterministic order.
    """
    if n_letters < 0:
        raise ValueError("n_letters must be >= 0")
    if k < 1:
        raise ValueError("k must be >= 1")
    names = [rank_letter(r) for r in range(1, n_letters + 1)]
    for pattern in _double_occurrence_patterns(n_letters):
        flat = tuple(names[r - 1] for r in pattern)
        for sizes in _compositions(2 * n_letters, k):
            comps, start = [], 0
            for size in sizes:
                comps.append(flat[start:start + size])
                start += size
            for assignment in itertools.product(alphabet.symbols, repeat=n_letters):
                proj = dict(zip(names, assignment))
                yield Nanophrase(alphabet, comps, proj, validate=False)
