"""Quantities preserved by the gated rewrite moves.

At the phrase level (pair deletions gated by the graph of tau):

* lk_phrase: for each component pair i<j, the product in the
  abelianization pi(alphabet, tau) of the symbols of letters crossing
  those two components.
* clv_phrase: per component, the parity of cross-component letters.
* so_phrase: per component, a signed census of single-component letters
  bucketed by their interleaving profile (the map (B_P)_j).
* t_invariant: the per-component collapse of the same data.

At the word level over a lifted alphabet the analogues read the
component pair off each letter's subscripts instead of its positions;
they agree with the phrase versions on flattened phrases and remain
defined on words that no phrase produces.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .core import Alphabet, AlphabetMismatch, NanowordError
from .lift import ProjectionNotLifted


class NonGraphR(NanowordError):
    """Phrase-level invariants need pair deletions gated by the graph of tau."""


def _require_graph_tau(moves, phrase):
    if moves.alphabet != phrase.alphabet:
        raise AlphabetMismatch("move system and phrase use different alphabets")
    if not moves.r_is_graph_of_tau:
        raise NonGraphR("R must equal the graph of tau")


@dataclass(frozen=True)
class PiElement:
    """Element of the abelian group on the alphabet with s * tau(s) = 1.

    Free orbits contribute an integer exponent on their representative;
    fixed points contribute an exponent mod 2.
    """

    alphabet: Alphabet
    exps: tuple

    @classmethod
    def _make(cls, alphabet, exps):
        cut = alphabet.n_free
        return cls(alphabet, tuple(e if i < cut else e % 2 for i, e in enumerate(exps)))

    @classmethod
    def identity(cls, alphabet):
        return cls(alphabet, (0,) * (alphabet.n_free + alphabet.n_fixed))

    @classmethod
    def from_symbol(cls, alphabet, symbol):
        exps = [0] * (alphabet.n_free + alphabet.n_fixed)
        exps[alphabet.orbit_index(symbol) - 1] = alphabet.epsilon(symbol)
        return cls._make(alphabet, exps)

    def __mul__(self, other):
        if self.alphabet != other.alphabet:
            raise AlphabetMismatch("group elements over different alphabets")
        return self._make(self.alphabet, tuple(a + b for a, b in zip(self.exps, other.exps)))

    def inverse(self):
        return self._make(self.alphabet, tuple(-e for e in self.exps))

    @property
    def is_identity(self):
        return not any(self.exps)

    def render(self):
        terms = []
        for idx, e in enumerate(self.exps):
            if e:
                rep = self.alphabet.representatives[idx]
                terms.append(rep if e == 1 else f"{rep}^{e}")
        return " ".join(terms) or "1"

    def __str__(self):
        return self.render()


@dataclass(frozen=True)
class SigmaVector:
    """Sparse vector of signed interleaving counts.

    Entries are keyed (component, p, q) by canonical orbit indices; the
    entry ring is the integers when both p and q index free orbits and
    Z/2 otherwise.  The type is (i) when every nonzero entry has p free,
    (ii) when every one has p fixed, and (iii) otherwise.
    """

    n_free: int
    k: int
    entries: tuple

    @classmethod
    def build(cls, n_free, k, raw):
        entries = []
        for (j, p, q), coeff in raw.items():
            if p > n_free or q > n_free:
                coeff %= 2
            if coeff:
                entries.append(((j, p, q), coeff))
        entries.sort()
        return cls(n_free, k, tuple(entries))

    @property
    def is_zero(self):
        return not self.entries

    @property
    def type_class(self):
        if not self.entries:
            return None
        ps = {p for (_j, p, _q), _c in self.entries}
        if all(p <= self.n_free for p in ps):
            return "i"
        if all(p > self.n_free for p in ps):
            return "ii"
        return "iii"

    def collapse(self):
        """Sum the component slots into a single block."""
        raw = defaultdict(int)
        for (_j, p, q), coeff in self.entries:
            raw[(1, p, q)] += coeff
        return SigmaVector.build(self.n_free, 1, raw)

    def render(self):
        if not self.entries:
            return "0"
        return " ".join(f"{j}:({p},{q}):{c}" for (j, p, q), c in self.entries)

    def __str__(self):
        return self.render()


@dataclass(frozen=True)
class SoValue:
    """Per component, a finite map from nonzero profile vectors to counts.

    Only type (i) and (ii) vectors appear; type (i) counts are integers,
    type (ii) counts live mod 2, and zero counts are dropped, so equality
    of SoValue objects is equality of the underlying maps.
    """

    maps: tuple

    def render(self):
        parts = []
        for j, comp_map in enumerate(self.maps, start=1):
            body = " ".join(f"[{vec}]={count}" for vec, count in comp_map) or "0"
            parts.append(f"{j}: {body}")
        return "; ".join(parts)

    def __str__(self):
        return self.render()


def _interleaving(occ_x, occ_y):
    """x-first/y-first flag and the y occurrence fixing the component slot."""
    x1, x2 = occ_x
    y1, y2 = occ_y
    if x1 < y1 < x2 < y2:
        return True, y2
    if y1 < x1 < y2 < x2:
        return False, y1
    return None


def sigma_table(phrase, moves):
    """Signed unit entries for every interleaved ordered letter pair.

    Maps (A, B, j) to (p, q, coeff): p and q are the orbit indices of
    |A| and |B|, j the component of the occurrence of B between or after
    the pair pattern, and the sign is epsilon(|B|) when A comes first and
    its negative otherwise (collapsed into Z/2 for mixed orbits).
    """
    _require_graph_tau(moves, phrase)
    alphabet = phrase.alphabet
    table = {}
    for x in phrase.letters:
        px = alphabet.orbit_index(phrase.proj[x])
        for y in phrase.letters:
            if x == y:
                continue
            hit = _interleaving(phrase.occurrences(x), phrase.occurrences(y))
            if hit is None:
                continue
            x_first, y_pos = hit
            sign = alphabet.epsilon(phrase.proj[y]) * (1 if x_first else -1)
            q = alphabet.orbit_index(phrase.proj[y])
            if px > alphabet.n_free or q > alphabet.n_free:
                sign %= 2
            j = phrase.comp_of[y_pos] + 1
            table[(x, y, j)] = (px, q, sign)
    return table


def _profile_vectors(phrase):
    """letter -> SigmaVector summing its signed interleavings with all others."""
    alphabet = phrase.alphabet
    out = {}
    for x in phrase.letters:
        px = alphabet.orbit_index(phrase.proj[x])
        raw = defaultdict(int)
        for y in phrase.letters:
            if x == y:
                continue
            hit = _interleaving(phrase.occurrences(x), phrase.occurrences(y))
            if hit is None:
                continue
            x_first, y_pos = hit
            sign = alphabet.epsilon(phrase.proj[y]) * (1 if x_first else -1)
            q = alphabet.orbit_index(phrase.proj[y])
            raw[(phrase.comp_of[y_pos] + 1, px, q)] += sign
        out[x] = SigmaVector.build(alphabet.n_free, phrase.k, raw)
    return out


def _bucketed_census(alphabet, members, profiles):
    bucket = defaultdict(int)
    for ltr, proj_sym in members:
        vec = profiles[ltr]
        if vec.is_zero or vec.type_class == "iii":
            continue
        bucket[vec] += alphabet.epsilon(proj_sym)
    entries = []
    for vec, total in bucket.items():
        if vec.type_class == "ii":
            total %= 2
        if total:
            entries.append((vec, total))
    entries.sort(key=lambda item: item[0].entries)
    return tuple(entries)


def so_phrase(phrase, moves):
    """The per-component signed census of single-component letters."""
    _require_graph_tau(moves, phrase)
    profiles = _profile_vectors(phrase)
    alphabet = phrase.alphabet
    maps = []
    for comp in range(1, phrase.k + 1):
        members = [(ltr, phrase.proj[ltr]) for ltr in phrase.letters
                   if phrase.component_pair(ltr) == (comp, comp)]
        maps.append(_bucketed_census(alphabet, members, profiles))
    return SoValue(tuple(maps))


def t_invariant(phrase, moves):
    """Per component, the epsilon-weighted sum of collapsed profiles.

    One block per component: entry (p, q) accumulates, over the
    single-component letters of that component, epsilon times the
    letter's interleaving counts summed across component slots.
    """
    _require_graph_tau(moves, phrase)
    profiles = _profile_vectors(phrase)
    alphabet = phrase.alphabet
    blocks = []
    for comp in range(1, phrase.k + 1):
        raw = defaultdict(int)
        for ltr in phrase.letters:
            if phrase.component_pair(ltr) != (comp, comp):
                continue
            eps = alphabet.epsilon(phrase.proj[ltr])
            for (_j, p, q), coeff in profiles[ltr].entries:
                raw[(1, p, q)] += eps * coeff
        blocks.append(SigmaVector.build(alphabet.n_free, 1, raw))
    return tuple(blocks)


def t_from_so(so_value, n_free):
    """Entry-sum recovery of the per-component blocks from an SoValue.

    Sums count * vector over each component map and collapses the
    component slots.  Matches t_invariant whenever every letter profile
    is of type (i) or (ii).
    """
    blocks = []
    for comp_map in so_value.maps:
        raw = defaultdict(int)
        for vec, count in comp_map:
            for (_j, p, q), coeff in vec.entries:
                raw[(1, p, q)] += count * coeff
        blocks.append(SigmaVector.build(n_free, 1, raw))
    return tuple(blocks)


def lk_phrase(phrase, moves):
    """Products over cross-component letters, one per component pair i<j."""
    _require_graph_tau(moves, phrase)
    alphabet = phrase.alphabet
    pairs = [(i, j) for i in range(1, phrase.k + 1) for j in range(i + 1, phrase.k + 1)]
    acc = {pair: PiElement.identity(alphabet) for pair in pairs}
    for ltr in phrase.letters:
        pair = phrase.component_pair(ltr)
        if pair[0] != pair[1]:
            acc[pair] = acc[pair] * PiElement.from_symbol(alphabet, phrase.proj[ltr])
    return tuple(acc[pair] for pair in pairs)


def clv_phrase(phrase, moves):
    """Per component, the parity of letters with one occurrence elsewhere."""
    _require_graph_tau(moves, phrase)
    counts = [0] * phrase.k
    for ltr in phrase.letters:
        c1, c2 = phrase.component_pair(ltr)
        if c1 != c2:
            counts[c1 - 1] += 1
            counts[c2 - 1] += 1
    return tuple(c % 2 for c in counts)


def _lifted_parts(word, lifted):
    from .lift import _require_lifted_word

    _require_lifted_word(word, lifted)
    return {ltr: lifted.part(word.proj[ltr]) for ltr in word.letters}


def _profile_vectors_lifted(word, lifted):
    base = lifted.base
    parts = _lifted_parts(word, lifted)
    out = {}
    for x in word.letters:
        px = base.orbit_index(parts[x][0])
        raw = defaultdict(int)
        for y in word.letters:
            if x == y:
                continue
            hit = _interleaving(word.occurrences(x), word.occurrences(y))
            if hit is None:
                continue
            x_first, _y_pos = hit
            sy, iy, jy = parts[y]
            # The component slot comes from the subscripts: the second one
            # when x comes first, the first one otherwise.
            slot = jy if x_first else iy
            sign = base.epsilon(sy) * (1 if x_first else -1)
            raw[(slot, px, base.orbit_index(sy))] += sign
        out[x] = SigmaVector.build(base.n_free, lifted.k, raw)
    return out


def so_lifted(word, lifted):
    """Word-level census: members are the diagonal-subscript letters."""
    parts = _lifted_parts(word, lifted)
    profiles = _profile_vectors_lifted(word, lifted)
    base = lifted.base
    maps = []
    for comp in range(1, lifted.k + 1):
        members = [(ltr, parts[ltr][0]) for ltr in word.letters
                   if parts[ltr][1] == comp and parts[ltr][2] == comp]
        maps.append(_bucketed_census(base, members, profiles))
    return SoValue(tuple(maps))


def lk_lifted(word, lifted):
    """Subscript-pair products in the base abelianization, pairs i<j."""
    parts = _lifted_parts(word, lifted)
    base = lifted.base
    pairs = [(i, j) for i in range(1, lifted.k + 1) for j in range(i + 1, lifted.k + 1)]
    acc = {pair: PiElement.identity(base) for pair in pairs}
    for ltr in word.letters:
        s, i, j = parts[ltr]
        if i != j:
            acc[(i, j)] = acc[(i, j)] * PiElement.from_symbol(base, s)
    return tuple(acc[pair] for pair in pairs)


def clv_lifted(word, lifted):
    """Per component, the parity of off-diagonal letters touching it."""
    parts = _lifted_parts(word, lifted)
    counts = [0] * lifted.k
    for ltr in word.letters:
        _s, i, j = parts[ltr]
        if i != j:
            counts[i - 1] += 1
            counts[j - 1] += 1
    return tuple(c % 2 for c in counts)


def phrase_invariants_applicable(moves):
    """Names of phrase invariants whose preservation the system guarantees.

    All of them need R = graph(tau).  The census and its collapse also
    need every S triple to be diagonal.
    """
    if not moves.r_is_graph_of_tau:
        return ()
    names = ("lk", "clv")
    if moves.s_is_sub_diagonal:
        names += ("So", "T")
    return names


def lifted_invariants_applicable(moves, lifted):
    """Names of word-level invariants guaranteed under a lifted system.

    lk and clv additionally need Q within the diagonal-subscript symbols;
    the census instead tolerates any Q but needs S within the lifted
    diagonal.
    """
    if moves.alphabet != lifted.alphabet or not moves.r_is_graph_of_tau:
        return ()
    names = ()
    if moves.q <= lifted.q_symbols():
        names += ("lk", "clv")
    if moves.s <= lifted.diagonal_triples():
        names += ("So",)
    return names
