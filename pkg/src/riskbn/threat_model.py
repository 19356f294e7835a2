"""Attack trees, STRIDE threat ids, DREAD priors and the tree -> BN transform.

Attack-tree source format::

    # comment
    leaf T_OBC_2_CommandTampering dread(R=2, E=2, D=2)
    gate Disrupt OR { D_OBC_5_ServiceDisruption, T_OBC_2_CommandTampering }
        cpt [0.10, 0.75, 0.80, 0.95]

``cpt`` lists P(gate=True | children) in canonical row order (first child
slowest-varying).  The root is the single gate no other gate references.
A leaf may appear under several gates, so the "tree" is a rooted DAG.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from riskbn.errors import (
    BadDreadScore,
    BadOverrideLength,
    BadOverrideValue,
    BadSegmentCount,
    BadStrideLetter,
    CycleDetected,
    DuplicateNodeId,
    MultipleRoots,
    NoRoot,
    NonNumericThreatNumber,
    TreeSyntaxError,
    UnresolvedChild,
)
from riskbn.network import NODE_ID_RE, BayesianNetwork, Cpt, NodeSpec, build_network, row_states


class StrideCategory(enum.Enum):
    SPOOFING = "S"
    TAMPERING = "T"
    REPUDIATION = "R"
    INFORMATION_DISCLOSURE = "I"
    DENIAL_OF_SERVICE = "D"
    ELEVATION_OF_PRIVILEGE = "E"

    @property
    def code(self) -> str:
        return self.value

    @property
    def label(self) -> str:
        return _STRIDE_LABELS[self]

    @classmethod
    def from_code(cls, letter: str) -> "StrideCategory":
        try:
            return cls(letter)
        except ValueError:
            raise BadStrideLetter(
                f"{letter!r} is not a STRIDE letter (expected one of S, T, R, I, D, E)",
                letter=letter,
            ) from None


_STRIDE_LABELS = {
    StrideCategory.SPOOFING: "Spoofing",
    StrideCategory.TAMPERING: "Tampering",
    StrideCategory.REPUDIATION: "Repudiation",
    StrideCategory.INFORMATION_DISCLOSURE: "InformationDisclosure",
    StrideCategory.DENIAL_OF_SERVICE: "DenialOfService",
    StrideCategory.ELEVATION_OF_PRIVILEGE: "ElevationOfPrivilege",
}

_SEGMENT_RE = re.compile(r"[A-Za-z0-9]+\Z")


@dataclass(frozen=True)
class ThreatId:
    category: StrideCategory
    interaction: str
    threat_number: int
    description: str

    def __str__(self) -> str:
        return f"{self.category.code}_{self.interaction}_{self.threat_number}_{self.description}"

    @property
    def short(self) -> str:
        """Compact label such as ``T_26_UnauthorizedControl``."""
        return f"{self.category.code}_{self.threat_number}_{self.description}"


def parse_threat_id(text: str) -> ThreatId:
    """Parse ``<STRIDE letter>_<interaction>_<number>_<description>``."""
    parts = text.split("_")
    if len(parts) != 4 or not all(parts):
        raise BadSegmentCount(
            f"{text!r}: expected 4 non-empty underscore-separated segments, got {len(parts)}",
            text=text,
        )
    letter, interaction, number, description = parts
    category = StrideCategory.from_code(letter)
    if not number.isdigit() or not number.isascii() or int(number) < 1:
        raise NonNumericThreatNumber(
            f"{text!r}: threat number {number!r} is not a positive integer", text=text
        )
    for seg in (interaction, description):
        if not _SEGMENT_RE.match(seg):
            raise BadSegmentCount(f"{text!r}: bad segment {seg!r}", text=text)
    return ThreatId(category, interaction, int(number), description)


def render_threat_id(tid: ThreatId) -> str:
    return str(tid)


# -- DREAD -------------------------------------------------------------------


@dataclass(frozen=True)
class DreadScore:
    """Reproducibility, exploitability and discoverability on a 1-3 scale."""

    reproducibility: int
    exploitability: int
    discoverability: int

    def __post_init__(self):
        for name in ("reproducibility", "exploitability", "discoverability"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or not 1 <= v <= 3:
                raise BadDreadScore(f"DREAD {name} must be an integer in [1, 3], got {v!r}")

    def __str__(self) -> str:
        return f"R={self.reproducibility},E={self.exploitability},D={self.discoverability}"


@dataclass(frozen=True)
class DreadWeights:
    exploitability: Fraction = Fraction(1, 2)
    discoverability: Fraction = Fraction(3, 10)
    reproducibility: Fraction = Fraction(1, 5)


DEFAULT_WEIGHTS = DreadWeights()


def dread_likelihood(
    score: DreadScore, weights: DreadWeights = DEFAULT_WEIGHTS, decimals: int | None = 2
) -> float:
    """Weighted likelihood of the normalized (/3) DREAD components.

    Rounded half-up to ``decimals`` places; pass ``None`` for the exact value.
    """
    exact = (
        Fraction(weights.exploitability) * Fraction(score.exploitability, 3)
        + Fraction(weights.discoverability) * Fraction(score.discoverability, 3)
        + Fraction(weights.reproducibility) * Fraction(score.reproducibility, 3)
    )
    if decimals is None:
        return float(exact)
    scale = 10**decimals
    return float(Fraction(int(exact * scale + Fraction(1, 2)), scale))


# -- attack tree -------------------------------------------------------------


class GateKind(enum.Enum):
    AND = "AND"
    OR = "OR"


@dataclass(frozen=True)
class Leaf:
    id: ThreatId
    dread: DreadScore

    @property
    def name(self) -> str:
        return str(self.id)


@dataclass(frozen=True)
class Gate:
    name: str
    kind: GateKind
    children: tuple[str, ...]
    cpt_override: tuple[float, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if self.cpt_override is not None:
            object.__setattr__(self, "cpt_override", tuple(float(p) for p in self.cpt_override))


AttackTreeNode = Leaf | Gate


@dataclass(frozen=True)
class AttackTree:
    nodes: tuple[AttackTreeNode, ...]
    root: str
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {n.name: n for n in self.nodes})

    def __getitem__(self, name: str) -> AttackTreeNode:
        return self._index[name]

    @property
    def leaves(self) -> list[Leaf]:
        return [n for n in self.nodes if isinstance(n, Leaf)]

    @property
    def gates(self) -> list[Gate]:
        return [n for n in self.nodes if isinstance(n, Gate)]


def validate_tree(nodes: Sequence[AttackTreeNode]) -> AttackTree:
    """Check references, overrides, acyclicity and the unique root."""
    index: dict[str, AttackTreeNode] = {}
    for n in nodes:
        if n.name in index:
            raise DuplicateNodeId(f"attack-tree node {n.name!r} declared twice", node=n.name)
        index[n.name] = n
    referenced: set[str] = set()
    for g in (n for n in nodes if isinstance(n, Gate)):
        if not NODE_ID_RE.match(g.name):
            raise TreeSyntaxError(f"invalid gate name {g.name!r}", node=g.name)
        if not g.children:
            raise TreeSyntaxError(f"gate {g.name!r} has no children", node=g.name)
        if len(set(g.children)) != len(g.children):
            raise TreeSyntaxError(f"gate {g.name!r} lists a child twice", node=g.name)
        for c in g.children:
            if c not in index:
                raise UnresolvedChild(
                    f"gate {g.name!r} references undeclared child {c!r}", node=g.name, child=c
                )
        referenced.update(g.children)
        if g.cpt_override is not None:
            expected = 2 ** len(g.children)
            if len(g.cpt_override) != expected:
                raise BadOverrideLength(
                    f"gate {g.name!r}: cpt needs {expected} entries, got {len(g.cpt_override)}",
                    node=g.name,
                    expected=expected,
                    actual=len(g.cpt_override),
                )
            for p in g.cpt_override:
                if not 0.0 <= p <= 1.0:
                    raise BadOverrideValue(
                        f"gate {g.name!r}: cpt entry {p!r} outside [0, 1]", node=g.name
                    )

    _check_acyclic(index)
    unreferenced = [n.name for n in nodes if n.name not in referenced]
    root_gates = [n for n in unreferenced if isinstance(index[n], Gate)]
    if not root_gates:
        raise NoRoot("attack tree has no root gate")
    if len(unreferenced) > 1:
        raise MultipleRoots(
            f"attack tree has several unreferenced nodes: {', '.join(unreferenced)}",
            roots=unreferenced,
        )
    return AttackTree(tuple(nodes), root_gates[0])


def _check_acyclic(index: Mapping[str, AttackTreeNode]) -> None:
    colour: dict[str, int] = {}

    def visit(name: str, path: list[str]) -> None:
        state = colour.get(name, 0)
        if state == 2:
            return
        if state == 1:
            cycle = path[path.index(name):] + [name]
            raise CycleDetected(f"attack tree cycle: {' -> '.join(cycle)}", cycle=cycle)
        colour[name] = 1
        node = index[name]
        if isinstance(node, Gate):
            for c in node.children:
                visit(c, path + [name])
        colour[name] = 2

    for name in index:
        visit(name, [])


# -- DSL parser --------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<number>[-+]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?(?![A-Za-z_]))
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[(){}\[\],=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise TreeSyntaxError(
                f"line {line}, column {pos - line_start + 1}: unexpected character {text[pos]!r}",
                line=line,
                column=pos - line_start + 1,
            )
        kind = m.lastgroup
        if kind == "newline":
            line, line_start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(_Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.pos]

    def error(self, message: str, tok: _Token | None = None) -> TreeSyntaxError:
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return TreeSyntaxError(
            f"line {tok.line}, column {tok.col}: {message}, found {found}",
            line=tok.line,
            column=tok.col,
        )

    def advance(self) -> _Token:
        tok = self.tok
        self.pos += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> _Token:
        tok = self.tok
        if tok.kind != kind or (text is not None and tok.text != text):
            raise self.error(f"expected {text or kind!r}")
        return self.advance()

    def at(self, kind: str, text: str | None = None) -> bool:
        return self.tok.kind == kind and (text is None or self.tok.text == text)

    def parse(self) -> Iterator[AttackTreeNode]:
        while not self.at("eof"):
            if self.at("ident", "leaf"):
                yield self.leaf()
            elif self.at("ident", "gate"):
                yield self.gate()
            else:
                raise self.error("expected 'leaf' or 'gate'")

    def leaf(self) -> Leaf:
        self.advance()
        tok = self.expect("ident")
        try:
            tid = parse_threat_id(tok.text)
        except (BadSegmentCount, BadStrideLetter, NonNumericThreatNumber) as e:
            raise TreeSyntaxError(
                f"line {tok.line}, column {tok.col}: {e}", line=tok.line, column=tok.col
            ) from e
        self.expect("ident", "dread")
        self.expect("punct", "(")
        values = {}
        for i, key in enumerate("RED"):
            if i:
                self.expect("punct", ",")
            self.expect("ident", key)
            self.expect("punct", "=")
            num = self.expect("number")
            if not num.text.isdigit():
                raise self.error("expected an integer DREAD component", num)
            values[key] = int(num.text)
        self.expect("punct", ")")
        try:
            score = DreadScore(values["R"], values["E"], values["D"])
        except BadDreadScore as e:
            raise TreeSyntaxError(
                f"line {tok.line}, column {tok.col}: {e}", line=tok.line, column=tok.col
            ) from e
        return Leaf(tid, score)

    def gate(self) -> Gate:
        self.advance()
        name = self.expect("ident").text
        kind_tok = self.tok
        if not (self.at("ident", "AND") or self.at("ident", "OR")):
            raise self.error("expected 'AND' or 'OR'")
        self.advance()
        self.expect("punct", "{")
        children = [self.expect("ident").text]
        while self.at("punct", ","):
            self.advance()
            children.append(self.expect("ident").text)
        self.expect("punct", "}")
        override = None
        if self.at("ident", "cpt"):
            self.advance()
            self.expect("punct", "[")
            override = [float(self.expect("number").text)]
            while self.at("punct", ","):
                self.advance()
                override.append(float(self.expect("number").text))
            self.expect("punct", "]")
        return Gate(name, GateKind(kind_tok.text), tuple(children), override)


def parse_attack_tree(text: str) -> AttackTree:
    """Parse attack-tree DSL source into a validated :class:`AttackTree`."""
    return validate_tree(list(_Parser(text).parse()))


def render_attack_tree(tree: AttackTree) -> str:
    """Serialize a tree back to DSL source."""
    lines = []
    for n in tree.nodes:
        if isinstance(n, Leaf):
            d = n.dread
            lines.append(
                f"leaf {n.name} dread(R={d.reproducibility}, E={d.exploitability}, "
                f"D={d.discoverability})"
            )
        else:
            line = f"gate {n.name} {n.kind.value} {{ {', '.join(n.children)} }}"
            if n.cpt_override is not None:
                line += " cpt [" + ", ".join(repr(p) for p in n.cpt_override) + "]"
            lines.append(line)
    return "\n".join(lines) + "\n"


# -- transformation ----------------------------------------------------------


def strict_gate_rows(kind: GateKind, n_children: int) -> list[float]:
    """Deterministic AND/OR truth table as P(True) per canonical row."""
    combine = all if kind is GateKind.AND else any
    return [
        1.0 if combine(row_states(i, n_children)) else 0.0 for i in range(2**n_children)
    ]


def leaf_metadata(leaf: Leaf) -> dict[str, str]:
    return {"stride": leaf.id.category.label, "dread": str(leaf.dread)}


def gate_metadata(gate: Gate) -> dict[str, str]:
    return {"gate": gate.kind.value}


def transform_to_bn(
    tree: AttackTree, weights: DreadWeights = DEFAULT_WEIGHTS
) -> BayesianNetwork:
    """Leaves become DREAD-prior roots; gates become conditional nodes.

    Edges point from each child in the tree to its gate (cause -> effect).
    """
    specs = []
    for n in tree.nodes:
        if isinstance(n, Leaf):
            cpt = Cpt.prior(dread_likelihood(n.dread, weights))
            specs.append(NodeSpec(n.name, cpt, leaf_metadata(n)))
        else:
            p_true = (
                n.cpt_override
                if n.cpt_override is not None
                else strict_gate_rows(n.kind, len(n.children))
            )
            specs.append(NodeSpec(n.name, Cpt.from_p_true(n.children, p_true), gate_metadata(n)))
    return build_network(specs)


def lint_tree(tree: AttackTree) -> list[str]:
    """Warnings for overrides that look inconsistent with their gate kind.

    Never raises: leaky gates with nonzero baselines are legitimate, so these
    are hints only.
    """
    warnings = []
    for g in tree.gates:
        if g.cpt_override is None:
            continue
        k = len(g.children)
        rows = g.cpt_override
        for i in range(len(rows)):
            for j in range(k):
                bit = 1 << (k - 1 - j)
                if not i & bit and rows[i | bit] < rows[i]:
                    warnings.append(
                        f"gate {g.name}: cpt is not monotone in {g.children[j]} "
                        f"(row {i} -> row {i | bit})"
                    )
                    break
        if k > 1:
            singles = [rows[1 << (k - 1 - j)] for j in range(k)]
            if g.kind is GateKind.AND and any(p > 0.5 for p in singles):
                warnings.append(f"gate {g.name}: AND gate fires above 0.5 with a single parent")
            if g.kind is GateKind.OR and any(p < 0.5 for p in singles):
                warnings.append(f"gate {g.name}: OR gate fires below 0.5 with a single parent")
    return warnings
