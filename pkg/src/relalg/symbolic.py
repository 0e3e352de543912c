"""Word-level rewriting of unions of relation compositions.

Atoms name the relations of a construction bundle::

    D   diagonal of the whole space        P   diagonal restricted to X
    Q   diagonal restricted to Y           E   the target equivalence on X
    G   X -> Y                             G'  converse of G (Y -> X)
    H   Y -> Y

A word is a composition read left to right (``G'G`` means G' then G); an
expression is a union of words written ``W1+W2+...``.  Powers of
``I ∪ J = D+G+G'+G'G+H`` are computed by left multiplication with the
generator followed by :func:`normalize`, which applies a fixed ordered list of
identities and then drops words that are empty or subsumed by another word
of the same union.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .relations import ANY, X, Y, Relation, compose, union_all

ATOMS = ("D", "P", "Q", "E", "G", "G'", "H")
RANK = {a: i for i, a in enumerate(ATOMS)}
SORT = {
    "D": (ANY, ANY),
    "P": (X, X),
    "Q": (Y, Y),
    "E": (X, X),
    "G": (X, Y),
    "G'": (Y, X),
    "H": (Y, Y),
}

_TOKEN = re.compile(r"G'|Ḡ|[DPQEGH]")


class ParseError(ValueError):
    pass


class TraceDidNotConverge(RuntimeError):
    pass


class Rule(NamedTuple):
    lhs: tuple
    rhs: tuple

    def __str__(self):
        return f"{''.join(self.lhs)} -> {''.join(self.rhs)}"


def _rule(lhs: str, rhs: str) -> Rule:
    return Rule(tuple(_TOKEN.findall(lhs)), tuple(_TOKEN.findall(rhs)))


# Order matters: each pass applies these in sequence.
RULES = tuple(
    _rule(lhs, rhs)
    for lhs, rhs in [
        ("DD", "D"),
        ("DE", "E"),
        ("DG", "G"),
        ("DG'", "G'"),
        ("DH", "H"),
        ("DP", "P"),
        ("DQ", "Q"),
        ("ED", "E"),
        ("EE", "E"),
        ("EP", "E"),
        ("GD", "G"),
        ("GG'", "P"),
        ("GHG'", "E"),
        ("GQ", "G"),
        ("G'D", "G'"),
        ("G'P", "G'"),
        ("HD", "H"),
        ("HH", "Q"),
        ("HQ", "H"),
        ("PD", "P"),
        ("PE", "E"),
        ("PG", "G"),
        ("PP", "P"),
        ("QD", "Q"),
        ("QG'", "G'"),
        ("QH", "H"),
        ("QQ", "Q"),
    ]
)


def word_key(word: tuple) -> tuple:
    return tuple(RANK[a] for a in word)


def format_word(word: tuple) -> str:
    return "".join(word)


def is_well_sorted(word: tuple) -> bool:
    """False when some composition in ``word`` joins an X end to a Y end.

    ``D`` passes the sort of its neighbour through, so ``GDG`` is as empty as
    ``GG``.
    """
    cur = ANY
    for atom in word:
        dom, cod = SORT[atom]
        if dom != ANY and cur != ANY and dom != cur:
            return False
        if cod != ANY:
            cur = cod
    return True


class Expr:
    """A union of words, printed in canonical order."""

    __slots__ = ("words",)

    def __init__(self, words: Iterable[tuple] = ()):
        words = frozenset(tuple(w) for w in words)
        for w in words:
            if not w or any(a not in RANK for a in w):
                raise ValueError(f"bad word {w!r}")
        self.words = words

    def sorted_words(self) -> list:
        return sorted(self.words, key=word_key)

    def __eq__(self, other):
        if not isinstance(other, Expr):
            return NotImplemented
        return self.words == other.words

    def __hash__(self):
        return hash(self.words)

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.sorted_words())

    def __contains__(self, word):
        if isinstance(word, str):
            word = tokenize(word)
        return tuple(word) in self.words

    def __str__(self):
        return format_expr(self)

    def __repr__(self):
        return f"Expr({format_expr(self)!r})"


def tokenize(text: str) -> tuple:
    compact = re.sub(r"\s+", "", text)
    atoms = _TOKEN.findall(compact)
    if "".join(atoms) != compact:
        pos = 0
        for a in atoms:
            if not compact.startswith(a, pos):
                break
            pos += len(a)
        raise ParseError(f"unknown token at {compact[pos:pos + 3]!r} in {text!r}")
    return tuple("G'" if a == "Ḡ" else a for a in atoms)


def parse_expr(text: str) -> Expr:
    """Parse ``W1+W2+...``; ill-sorted words denote the empty relation and vanish."""
    if not text or not text.strip():
        raise ParseError("empty expression")
    words = []
    for part in text.split("+"):
        word = tokenize(part)
        if not word:
            raise ParseError(f"empty term in {text!r}")
        if is_well_sorted(word):
            words.append(word)
    return Expr(words)


def format_expr(e: Expr) -> str:
    return "+".join(format_word(w) for w in e.sorted_words())


GENERATOR = parse_expr("D+G+G'+G'G+H")
I_EXPR = parse_expr("D+G+G'+G'G")
J_EXPR = parse_expr("D+H")


def concat(left: Expr, right: Expr) -> Expr:
    """Distribute composition over union: every left word followed by every right word."""
    return Expr(a + b for a in left.words for b in right.words)


def expand_step(current: Expr) -> Expr:
    """Left-multiply by the generator, without normalizing."""
    return concat(GENERATOR, current)


def _find(word: tuple, pattern: tuple) -> int:
    n = len(pattern)
    for i in range(len(word) - n + 1):
        if word[i:i + n] == pattern:
            return i
    return -1


def rewrite_word(word: tuple, rules=RULES) -> tuple:
    """Apply ``rules`` in order, each at the leftmost match until it no
    longer matches, and repeat whole passes until nothing changes."""
    changed = True
    while changed:
        changed = False
        for lhs, rhs in rules:
            i = _find(word, lhs)
            while i >= 0:
                word = word[:i] + rhs + word[i + len(lhs):]
                changed = True
                i = _find(word, lhs)
    return word


@dataclass(frozen=True)
class Deletion:
    """A word dropped from a union because ``justified_by`` covers it."""

    step: int
    word: tuple
    justified_by: tuple

    def __str__(self):
        just = "+".join(format_word(w) for w in self.justified_by)
        return f"step {self.step}: drop {format_word(self.word)} (covered by {just})"


def _subsumers(word: tuple, present: frozenset):
    for i, atom in enumerate(word):
        if atom == "G'":
            cand = word[:i + 1] + ("E",) + word[i + 1:]
        elif atom == "G":
            cand = word[:i] + ("E",) + word[i:]
        else:
            continue
        if cand in present:
            yield cand


def normalize(e: Expr, audit: list | None = None, rules=RULES) -> Expr:
    """Canonical form of ``e``.

    1. rewrite every word with the ordered identities;
    2. merge duplicate words (the union is a set);
    3. drop ill-sorted words;
    4. drop a lone ``P`` when ``D`` or ``E`` is present;
    5. drop ``K G' L`` when ``K G' E L`` is present, ``K G L`` when
       ``K E G L`` is present, and a lone ``D`` when both ``Q`` and ``E``
       are present.

    Step 5 is decided against the union as it stands after step 4.  Every
    word dropped in steps 4 and 5 is reported to ``audit`` when given, tagged
    with its step number.
    """
    words = {rewrite_word(w, rules) for w in e.words}
    words = {w for w in words if is_well_sorted(w)}

    if ("P",) in words:
        cover = ("D",) if ("D",) in words else ("E",) if ("E",) in words else None
        if cover is not None:
            words.discard(("P",))
            if audit is not None:
                audit.append(Deletion(4, ("P",), (cover,)))

    present = frozenset(words)
    for w in sorted(present, key=word_key):
        cover = next(_subsumers(w, present), None)
        if cover is not None:
            words.discard(w)
            if audit is not None:
                audit.append(Deletion(5, w, (cover,)))
    if ("D",) in present and ("Q",) in present and ("E",) in present:
        words.discard(("D",))
        if audit is not None:
            audit.append(Deletion(5, ("D",), (("Q",), ("E",))))
    return Expr(words)


@dataclass(frozen=True)
class TraceReport:
    stages: tuple  # stages[k-1] is the normal form of the k-th power
    fixpoint: int  # least k with stage k == stage k+1

    @property
    def word_counts(self) -> tuple:
        return tuple(len(s) for s in self.stages)

    def stage(self, k: int) -> Expr:
        if k < 1:
            raise IndexError("stages are numbered from 1")
        return self.stages[min(k, len(self.stages)) - 1]

    def text(self) -> str:
        return "".join(format_expr(s) + "\n" for s in self.stages)

    def to_json(self) -> dict:
        return {
            "stages": [format_expr(s) for s in self.stages],
            "word_counts": list(self.word_counts),
            "fixpoint": self.fixpoint,
        }


def closure_trace(max_stages: int = 64, audit: list | None = None) -> TraceReport:
    """Normal forms of successive powers of the generator until two agree."""
    stages = [normalize(GENERATOR, audit)]
    while len(stages) <= max_stages:
        nxt = normalize(expand_step(stages[-1]), audit)
        if nxt == stages[-1]:
            stages.append(nxt)
            return TraceReport(tuple(stages), len(stages) - 1)
        stages.append(nxt)
    raise TraceDidNotConverge(f"no fixpoint within {max_stages} stages")


def _absorb_diagonal_pieces(e: Expr) -> Expr:
    if ("D",) not in e.words:
        return e
    return Expr(w for w in e.words if w not in {("P",), ("Q",)})


def verify_square_idempotent(e: Expr) -> bool:
    """True when ``e∘e`` and ``e`` have the same normal form.

    A lone ``P`` or ``Q`` beside a lone ``D`` is a sub-relation of it and is
    dropped from both sides before comparing; without this ``(D+H)(D+H)``
    normalizes to ``D+Q+H``.
    """
    square = _absorb_diagonal_pieces(normalize(concat(e, e)))
    return square == _absorb_diagonal_pieces(normalize(e))


def evaluate_word(word: tuple, atoms: dict) -> Relation:
    out = atoms[word[0]]
    for a in word[1:]:
        out = compose(out, atoms[a])
    return out


def evaluate_on_model(e: Expr, bundle) -> Relation:
    """Concrete value of ``e`` on a construction bundle."""
    atoms = bundle.atoms()
    memo: dict = {}

    def value(word):
        if len(word) == 1:
            return atoms[word[0]]
        if word not in memo:
            memo[word] = compose(value(word[:-1]), atoms[word[-1]])
        return memo[word]

    return union_all(bundle.space, (value(w) for w in e.words))


def audit_deletions(events: Iterable[Deletion], bundle, result: Expr | None = None) -> list:
    """Deletions whose dropped word is not covered on ``bundle``.

    A deletion passes when the dropped word's value lies inside the union of
    its justifying words, and inside the value of ``result`` when given.
    """
    atoms = bundle.atoms()
    final = evaluate_on_model(result, bundle) if result is not None else None
    failures = []
    for ev in events:
        dropped = evaluate_word(ev.word, atoms)
        cover = union_all(bundle.space, (evaluate_word(w, atoms) for w in ev.justified_by))
        if not dropped <= cover or (final is not None and not dropped <= final):
            failures.append(ev)
    return failures
