"""Line-oriented input files: ``key = value`` entries grouped in ``[section]`` blocks.

The first non-comment line must be ``format = 1``.  Keys may repeat
(``relator``, ``vertex``, ``edge``); ``#`` starts a comment.  Every
error carries the line and column it was found at.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError
from .groups import (FiniteExtension, FreeAbelian, FreeGroup, GraphEdge, GraphOfGroups, GroupSpec, PolyZ,
                     cyclic_group, heisenberg_group, klein_bottle_group)
from .scalars import QQ, parse_field

FORMAT_VERSION = 1
SECTIONS = ("group", "subgroup", "tower", "complex")


class ParseError(InputError):
    def __init__(self, message: str, line: int, col: int, path: str = "<input>"):
        super().__init__(f"{path}:{line}:{col}: {message}")
        self.line, self.col, self.path = line, col, path


@dataclass
class Entry:
    key: str
    value: str
    line: int
    col: int


@dataclass
class Section:
    name: str
    line: int
    entries: list = field(default_factory=list)

    def get(self, key, default=None):
        for e in self.entries:
            if e.key == key:
                return e
        return default

    def all(self, key):
        return [e for e in self.entries if e.key == key]

    def prefixed(self, prefix):
        return [e for e in self.entries if e.key.split()[0] == prefix]


@dataclass
class Document:
    path: str
    sections: dict = field(default_factory=dict)

    def section(self, name) -> Section | None:
        return self.sections.get(name)

    def error(self, message, entry: Entry | None = None, offset: int = 0):
        if entry is None:
            return ParseError(message, 1, 1, self.path)
        return ParseError(message, entry.line, entry.col + offset, self.path)


def parse_text(text: str, path: str = "<input>") -> Document:
    doc = Document(path)
    current = None
    seen_format = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        s = line.strip()
        if s.startswith("["):
            if not s.endswith("]"):
                raise ParseError("unterminated section header", lineno, indent + len(s), path)
            name = s[1:-1].strip()
            if name not in SECTIONS:
                raise ParseError(f"unknown section [{name}]", lineno, indent + 2, path)
            if not seen_format:
                raise ParseError("missing 'format = 1' before the first section", lineno, indent + 1, path)
            if name in doc.sections:
                raise ParseError(f"duplicate section [{name}]", lineno, indent + 1, path)
            current = Section(name, lineno)
            doc.sections[name] = current
            continue
        if "=" not in s:
            raise ParseError("expected 'key = value'", lineno, indent + 1, path)
        k, v = s.split("=", 1)
        key = " ".join(k.split())
        if not key:
            raise ParseError("empty key", lineno, indent + 1, path)
        vcol = indent + len(k) + 2 + (len(v) - len(v.lstrip()))
        value = v.strip()
        if current is None:
            if key != "format":
                raise ParseError(f"entry {key!r} outside of any section", lineno, indent + 1, path)
            if value != str(FORMAT_VERSION):
                raise ParseError(f"unsupported format version {value!r} (expected {FORMAT_VERSION})",
                                 lineno, vcol, path)
            seen_format = True
            continue
        current.entries.append(Entry(key, value, lineno, vcol))
    if not seen_format:
        raise ParseError("missing 'format = 1'", 1, 1, path)
    return doc


def load(path: str) -> tuple[Document, bytes]:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise ParseError("file is not UTF-8", 1, 1, path) from None
    return parse_text(text, path), data


# ---------------------------------------------------------------- words and elements

_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)(?:\s*\^\s*(-?\d+))?\s*")


def parse_word(text: str, names, doc: Document | None = None, entry: Entry | None = None, offset: int = 0) -> list:
    """``x*y^-1*x^2`` (or space separated) as a signed generator word; ``1`` is the identity."""
    s = text
    if s.strip() in ("1", ""):
        return []
    index = {n: i + 1 for i, n in enumerate(names)}
    out = []
    pos = 0
    while pos < len(s):
        if s[pos] in "* ":
            pos += 1
            continue
        m = _TOKEN.match(s, pos)
        if not m:
            raise _err(doc, entry, f"bad word syntax near {s[pos:pos + 8]!r}", offset + pos)
        name, exp = m.group(1), m.group(2)
        if name not in index:
            raise _err(doc, entry, f"unknown generator {name!r}", offset + m.start(1))
        e = int(exp) if exp is not None else 1
        out += [index[name] if e > 0 else -index[name]] * abs(e)
        pos = m.end()
    return out


def _err(doc, entry, message, offset):
    if doc is not None:
        return doc.error(message, entry, offset)
    return InputError(f"{message} (column {offset + 1})")


def _split_top(text: str, sep: str = ","):
    parts, start = [], 0
    for i, ch in enumerate(text):
        if ch == sep:
            parts.append((text[start:i], start))
            start = i + 1
    parts.append((text[start:], start))
    return parts


def parse_words(entry: Entry, names, doc: Document) -> list:
    out = []
    for piece, off in _split_top(entry.value):
        lead = len(piece) - len(piece.lstrip())
        out.append(parse_word(piece.strip(), names, doc, entry, off + lead))
    return out


def parse_element(text: str, algebra, doc: Document | None = None, entry: Entry | None = None):
    """A linear combination like ``2*a*b^-1 - 1/2 + c`` in a group algebra."""
    G = algebra.group
    F = algebra.field
    s = text.strip()
    terms = []
    i, start, sign = 0, 0, 1
    # split on top-level + and - (a '-' directly after '^' is an exponent sign)
    pieces = []
    buf_start = 0
    for i, ch in enumerate(s):
        if ch in "+-" and i > 0 and s[i - 1] != "^" and s[:i].strip():
            pieces.append((s[buf_start:i], buf_start))
            buf_start = i
    pieces.append((s[buf_start:], buf_start))
    total = algebra.zero
    for piece, off in pieces:
        p = piece.strip()
        lead = len(piece) - len(piece.lstrip())
        sign = 1
        while p and p[0] in "+-":
            if p[0] == "-":
                sign = -sign
            p = p[1:].lstrip()
            lead += 1
        if not p:
            raise _err(doc, entry, "empty term", off + lead)
        m = re.match(r"(-?\d+(?:/\d+)?)\s*(\*\s*)?", p)
        coeff = Fraction(1)
        word_text = p
        if m and (m.end() == len(p) or m.group(2)):
            coeff = Fraction(m.group(1))
            word_text = p[m.end():]
        c = F(coeff * sign) if F is not QQ else QQ(coeff * sign)
        w = parse_word(word_text, G.names, doc, entry, off + lead + (len(p) - len(word_text)))
        total = total + algebra.monomial(G.normal_form(w), c)
    return total


# ---------------------------------------------------------------- groups


def _int(doc, entry, what="integer"):
    try:
        return int(entry.value)
    except ValueError:
        raise doc.error(f"expected an {what}, got {entry.value!r}", entry) from None


def _names(entry, n=None, default=None):
    if entry is None:
        return default
    return [x.strip() for x in entry.value.replace(",", " ").split()]


def _require(doc, sec: Section, key):
    e = sec.get(key)
    if e is None:
        raise ParseError(f"missing key {key!r} in [{sec.name}]", sec.line, 1, doc.path)
    return e


def field_of(doc: Document, default=QQ):
    sec = doc.section("group") or doc.section("tower")
    e = sec.get("field") if sec else None
    if e is None:
        return default
    try:
        return parse_field(e.value)
    except (InputError, ValueError) as exc:
        raise doc.error(str(exc), e) from None


def build_group(doc: Document) -> GroupSpec:
    sec = doc.section("group")
    if sec is None:
        raise ParseError("missing [group] section", 1, 1, doc.path)
    kind_e = _require(doc, sec, "kind")
    kind = kind_e.value
    try:
        if kind == "free":
            n = _int(doc, _require(doc, sec, "rank"))
            return FreeGroup(n, _names(sec.get("names")))
        if kind == "free_abelian":
            n = _int(doc, _require(doc, sec, "rank"))
            return FreeAbelian(n, _names(sec.get("names")))
        if kind == "klein_bottle":
            return klein_bottle_group()
        if kind == "heisenberg":
            return heisenberg_group()
        if kind == "cyclic":
            return cyclic_group(_int(doc, _require(doc, sec, "order")))
        if kind == "klein_extension":
            from .crossed import klein_extension
            return klein_extension()
        if kind == "polyz":
            return _build_polyz(doc, sec)
        if kind == "graph":
            return _build_graph(doc, sec)
    except ParseError:
        raise
    except InputError as exc:
        raise doc.error(str(exc), kind_e) from None
    raise doc.error(f"unknown group kind {kind!r}", kind_e)


def _build_polyz(doc, sec):
    names = _names(_require(doc, sec, "names"))
    acts, invs = [], []
    for j, name in enumerate(names):
        if j == 0:
            acts.append([])
            invs.append([])
            continue
        a = sec.get(f"act {name}")
        b = sec.get(f"inverse {name}")
        if a is None or b is None:
            raise ParseError(f"layer {name!r} needs 'act {name}' and 'inverse {name}'", sec.line, 1, doc.path)
        lower = names[:j]
        acts.append(parse_words(a, lower, doc))
        invs.append(parse_words(b, lower, doc))
    return PolyZ(acts, invs, names)


def _matrix(doc, entry, text, offset=0):
    rows = []
    for r in text.split(";"):
        r = r.strip()
        try:
            rows.append(tuple(int(x) for x in r.split()) if r else ())
        except ValueError:
            raise doc.error(f"bad integer matrix {text!r}", entry, offset) from None
    return tuple(rows)


def _build_graph(doc, sec):
    ranks = [_int(doc, e) for e in sec.all("vertex")]
    edges = []
    for e in sec.all("edge"):
        parts = e.value.split("|")
        if len(parts) != 3:
            raise doc.error("edge needs 'src dst rank | src_map | dst_map'", e)
        head = parts[0].split()
        if len(head) != 3:
            raise doc.error("edge head must be 'src dst rank'", e)
        try:
            src, dst, rank = (int(x) for x in head)
        except ValueError:
            raise doc.error("edge head must be integers", e) from None
        sm = _matrix(doc, e, parts[1], len(parts[0]) + 1)
        dm = _matrix(doc, e, parts[2], len(parts[0]) + len(parts[1]) + 2)
        if rank == 0:
            sm = tuple(() for _ in range(ranks[src] if src < len(ranks) else 0))
            dm = tuple(() for _ in range(ranks[dst] if dst < len(ranks) else 0))
        edges.append(GraphEdge(src, dst, rank, sm, dm))
    tree_e = sec.get("tree")
    tree = [int(x) for x in tree_e.value.replace(",", " ").split()] if tree_e else []
    base_e = sec.get("base")
    base = _int(doc, base_e) if base_e else 0
    return GraphOfGroups(ranks, edges, tree, base)


def subgroup_generators(doc: Document, G: GroupSpec) -> list:
    """Generators only; no index computation, so infinite-index subgroups are fine."""
    sec = doc.section("subgroup")
    if sec is None:
        raise ParseError("missing [subgroup] section", 1, 1, doc.path)
    return [G.normal_form(w) for w in parse_words(_require(doc, sec, "generators"), G.names, doc)]


def build_subgroup(doc: Document, G: GroupSpec):
    from .cosets import finite_index_data
    sec = doc.section("subgroup")
    if sec is None:
        raise ParseError("missing [subgroup] section", 1, 1, doc.path)
    ge = _require(doc, sec, "generators")
    gens = [G.normal_form(w) for w in parse_words(ge, G.names, doc)]
    spec_e = sec.get("spec")
    spec = None
    if spec_e is not None:
        parts = spec_e.value.split()
        if len(parts) != 2 or parts[0] not in ("free", "free_abelian"):
            raise doc.error("spec must be 'free N' or 'free_abelian N'", spec_e)
        n = int(parts[1])
        spec = FreeGroup(n) if parts[0] == "free" else FreeAbelian(n)
    try:
        if spec is not None and not isinstance(G, FreeGroup):
            return finite_index_data(G, gens, subgroup=spec, subgroup_images=gens)
        return finite_index_data(G, gens)
    except InputError as exc:
        raise doc.error(str(exc), ge) from None


def subgroup_extras(doc: Document, G: GroupSpec) -> dict:
    """Optional witness data: ``t``, ``range``, ``mode`` and ``transversal``."""
    sec = doc.section("subgroup")
    out = {}
    if sec is None:
        return out
    if sec.get("t"):
        out["t"] = G.normal_form(parse_word(sec.get("t").value, G.names, doc, sec.get("t")))
    if sec.get("range"):
        out["range"] = _int(doc, sec.get("range"))
    if sec.get("mode"):
        out["mode"] = sec.get("mode").value
    if sec.get("transversal"):
        out["transversal"] = [G.normal_form(w) for w in parse_words(sec.get("transversal"), G.names, doc)]
    return out


def complex_options(doc: Document) -> dict:
    sec = doc.section("complex")
    out = {"relators": None, "aspherical": True}
    if sec is None:
        return out
    asph = sec.get("aspherical")
    if asph is not None:
        if asph.value not in ("true", "false"):
            raise doc.error("aspherical must be true or false", asph)
        out["aspherical"] = asph.value == "true"
    return out


def build_complex(doc: Document, G: GroupSpec, field_):
    from .group_algebra import fox_complex
    sec = doc.section("complex")
    rels = None
    if sec is not None:
        kind = sec.get("kind")
        if kind is not None and kind.value != "fox":
            raise doc.error(f"unknown complex kind {kind.value!r}", kind)
        given = sec.all("relator")
        if given:
            rels = [tuple(parse_word(e.value, G.names, doc, e)) for e in given]
    try:
        return fox_complex(G, field_, rels)
    except InputError as exc:
        e = sec.all("relator")[0] if sec is not None and sec.all("relator") else None
        raise doc.error(str(exc), e) from None


def tower_spec(doc: Document) -> dict:
    sec = doc.section("tower")
    if sec is None:
        return {"kind": "group"}
    kind = _require(doc, sec, "kind")
    out = {"kind": kind.value}
    if kind.value not in ("group", "rational", "malcev_neumann"):
        raise doc.error(f"unknown tower kind {kind.value!r}", kind)
    if sec.get("variable"):
        out["variable"] = sec.get("variable").value
    if sec.get("order"):
        out["order"] = _int(doc, sec.get("order"))
    return out
