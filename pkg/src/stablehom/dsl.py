"""Parser for the session language: rings, modules, maps, queries.

Statements are ``;``-terminated and newline-insensitive; ``#`` starts a line
comment; an optional first line ``#! stablehom 1`` pins the format version.
Matrices use bracket syntax where each inner bracket lists the coefficients
of one relation (for ``rels``) or the image of one source generator (for
maps), in generator order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ParseFailure
from .poly import parse_poly
from .scalars import GF, QQ
from .errors import StablehomError

QUERY_OPS = {
    "resolve": ("module", "int"),
    "transpose": ("module",),
    "syzygy": ("module", "int"),
    "ext": ("module", "int"),
    "torsionless": ("module",),
    "j2": ("module",),
    "psi": ("module",),
    "pseudoker": ("map",),
    "pseudocoker": ("map",),
    "is_rbm": ("map",),
    "theta": ("map",),
    "perfect": ("map", "map"),
    "report": ("map",),
    "ext_dual_vanishes": ("module",),
    "stable_iso": ("map", "map"),
}


@dataclass
class Diagnostic:
    code: str
    line: int
    col: int
    message: str
    expected: tuple = ()

    def render(self) -> str:
        exp = f" (expected {', '.join(self.expected)})" if self.expected else ""
        return f"{self.line}:{self.col}: {self.code}: {self.message}{exp}"


@dataclass
class RingDecl:
    name: str
    field_spec: str  # "qq" or "gf:P"
    vars: tuple
    ideal: tuple  # polynomial texts
    order_kind: str
    gorenstein: bool
    line: int
    col: int


@dataclass
class ModuleDecl:
    name: str
    ring: str
    gen_degrees: tuple
    rels: tuple  # tuple of tuples of polynomial texts (one inner tuple per relation)
    line: int
    col: int


@dataclass
class MapDecl:
    name: str
    ring: str
    source: str
    target: str
    cols: tuple  # tuple of tuples of texts (one inner tuple per source generator)
    line: int
    col: int


@dataclass
class QueryDecl:
    op: str
    args: tuple
    line: int
    col: int

    def echo(self) -> str:
        return " ".join([self.op] + [str(a) for a in self.args])


@dataclass
class SessionAst:
    header_version: int | None
    decls: list = field(default_factory=list)


_SYMBOLS = ("->", "=", "[", "]", "(", ")", ",", ";", "/", "+", "-", "*", "^")


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind  # name | int | sym | eof
        self.text = text
        self.line = line
        self.col = col


def _tokenize(text: str, diags: list):
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("name", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("int", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if text.startswith("->", i):
            tokens.append(_Token("sym", "->", line, col))
            i += 2
            col += 2
            continue
        if ch in "=[](),;/+-*^":
            tokens.append(_Token("sym", ch, line, col))
            i += 1
            col += 1
            continue
        diags.append(Diagnostic("SyntaxError", line, col, f"unexpected character {ch!r}"))
        i += 1
        col += 1
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.diags: list[Diagnostic] = []
        self.header_version = None
        body = text
        stripped = text.lstrip()
        if stripped.startswith("#!"):
            first, _, rest = text.partition("\n")
            parts = first[first.index("#!") + 2 :].split()
            if len(parts) != 2 or parts[0] != "stablehom" or not parts[1].isdigit():
                self.diags.append(Diagnostic("SyntaxError", 1, 1, f"bad header line {first!r}"))
            else:
                self.header_version = int(parts[1])
                if self.header_version != 1:
                    self.diags.append(
                        Diagnostic("SyntaxError", 1, 1, f"unsupported format version {parts[1]}")
                    )
            body = "\n" + rest  # keep line numbers aligned
        self.tokens = _tokenize(body, self.diags)
        self.pos = 0
        self.rings: dict = {}
        self.modules: dict = {}
        self.maps: dict = {}
        self.current_ring: str | None = None
        self.field = None
        self.vars: tuple = ()
        self.weights: tuple = ()

    # -- token helpers -----------------------------------------------------
    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        t = self.tokens[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def err(self, tok: _Token, code: str, message: str, expected=()):
        self.diags.append(Diagnostic(code, tok.line, tok.col, message, tuple(expected)))

    def expect_sym(self, sym: str) -> bool:
        t = self.peek()
        if t.kind == "sym" and t.text == sym:
            self.next()
            return True
        self.err(t, "SyntaxError", f"got {t.text!r}", expected=(repr(sym),))
        return False

    def expect_name(self, what="identifier"):
        t = self.peek()
        if t.kind == "name":
            return self.next()
        self.err(t, "SyntaxError", f"got {t.text!r}", expected=(what,))
        return None

    def expect_int(self, signed=True):
        t = self.peek()
        sign = 1
        if signed and t.kind == "sym" and t.text == "-":
            self.next()
            sign = -1
            t = self.peek()
        if t.kind == "int":
            self.next()
            return sign * int(t.text)
        self.err(t, "SyntaxError", f"got {t.text!r}", expected=("integer",))
        return None

    def skip_to_semicolon(self):
        while True:
            t = self.peek()
            if t.kind == "eof":
                return
            self.next()
            if t.kind == "sym" and t.text == ";":
                return

    # -- polynomial slices ---------------------------------------------------
    def poly_text(self):
        """Collect tokens of one polynomial until , ] ) ; at depth 0."""
        parts = []
        depth = 0
        start = self.peek()
        while True:
            t = self.peek()
            if t.kind == "eof":
                break
            if t.kind == "sym":
                if t.text == "(":
                    depth += 1
                elif t.text == ")":
                    if depth == 0:
                        break
                    depth -= 1
                elif t.text in (",", "]", ";") and depth == 0:
                    break
            parts.append(t.text)
            self.next()
        if not parts:
            self.err(start, "SyntaxError", "empty polynomial", expected=("polynomial",))
            return None, start
        return " ".join(parts), start

    def check_poly(self, text: str, tok: _Token):
        if self.field is None:
            return None
        try:
            return parse_poly(text, self.vars, self.field)
        except StablehomError as e:
            self.err(tok, "SyntaxError", f"bad polynomial {text!r}: {e}")
            return None

    # -- statements ----------------------------------------------------------
    def parse(self) -> SessionAst:
        ast = SessionAst(self.header_version)
        while True:
            t = self.peek()
            if t.kind == "eof":
                break
            if t.kind != "name":
                self.err(t, "SyntaxError", f"got {t.text!r}",
                         expected=("ring", "module", "map", "query"))
                self.skip_to_semicolon()
                continue
            if t.text == "ring":
                d = self.ring_decl()
            elif t.text == "module":
                d = self.module_decl()
            elif t.text == "map":
                d = self.map_decl()
            elif t.text == "query":
                d = self.query_decl()
            else:
                self.err(t, "SyntaxError", f"unknown statement {t.text!r}",
                         expected=("ring", "module", "map", "query"))
                self.skip_to_semicolon()
                continue
            if d is not None:
                ast.decls.append(d)
        if self.diags:
            raise ParseFailure(self.diags)
        return ast

    def ring_decl(self):
        kw = self.next()
        name_tok = self.expect_name("ring name")
        if name_tok is None:
            self.skip_to_semicolon()
            return None
        self.expect_sym("=")
        ftok = self.expect_name("QQ or GF")
        field_spec = None
        if ftok is not None:
            if ftok.text == "QQ":
                field_spec = "qq"
            elif ftok.text == "GF":
                self.expect_sym("(")
                p = self.expect_int(signed=False)
                self.expect_sym(")")
                if p is not None:
                    field_spec = f"gf:{p}"
            else:
                self.err(ftok, "SyntaxError", f"unknown field {ftok.text!r}", expected=("QQ", "GF(p)"))
        self.expect_sym("[")
        names = []
        while True:
            v = self.expect_name("variable name")
            if v is None:
                break
            names.append(v.text)
            t = self.peek()
            if t.kind == "sym" and t.text == ",":
                self.next()
                continue
            break
        self.expect_sym("]")
        ideal = []
        t = self.peek()
        if t.kind == "sym" and t.text == "/":
            self.next()
            self.expect_sym("(")
            while True:
                # set context so polynomial slices validate against this ring
                self._set_ring_context(field_spec, tuple(names))
                text, ptok = self.poly_text()
                if text is not None:
                    self.check_poly(text, ptok)
                    ideal.append(text)
                t = self.peek()
                if t.kind == "sym" and t.text == ",":
                    self.next()
                    continue
                break
            self.expect_sym(")")
        order_kind = "degrevlex"
        gorenstein = False
        while True:
            t = self.peek()
            if t.kind == "name" and t.text in ("grevlex", "glex", "gorenstein"):
                self.next()
                if t.text == "grevlex":
                    order_kind = "degrevlex"
                elif t.text == "glex":
                    order_kind = "deglex"
                else:
                    gorenstein = True
                continue
            break
        self.expect_sym(";")
        name = name_tok.text
        if name in self.rings:
            self.err(name_tok, "DuplicateName", f"ring {name!r} already declared")
            return None
        if field_spec is not None and field_spec.startswith("gf:"):
            try:
                GF(int(field_spec[3:]))
            except StablehomError as e:
                self.err(name_tok, "NonPrimeModulus", str(e))
        decl = RingDecl(name, field_spec or "qq", tuple(names), tuple(ideal),
                        order_kind, gorenstein, name_tok.line, name_tok.col)
        self.rings[name] = decl
        self.current_ring = name
        self._set_ring_context(decl.field_spec, decl.vars)
        # validate ideal homogeneity at parse time
        if self.field is not None:
            for g in ideal:
                p = self.check_poly(g, name_tok)
                if p is not None and not p.is_homogeneous(self.weights):
                    self.err(name_tok, "InhomogeneousEntry",
                             f"ideal generator {g!r} is not homogeneous")
        return decl

    def _set_ring_context(self, field_spec, names):
        self.vars = tuple(names)
        self.weights = (1,) * len(self.vars)
        try:
            if field_spec == "qq" or field_spec is None:
                self.field = QQ
            else:
                self.field = GF(int(field_spec[3:]))
        except StablehomError:
            self.field = None

    def bracket_rows(self):
        """[[...],[...]] -> list of (list of (text, token))."""
        rows = []
        self.expect_sym("[")
        t = self.peek()
        if t.kind == "sym" and t.text == "]":
            self.next()
            return rows
        while True:
            self.expect_sym("[")
            row = []
            t = self.peek()
            if t.kind == "sym" and t.text == "]":
                self.next()
            else:
                while True:
                    text, ptok = self.poly_text()
                    row.append((text, ptok))
                    t = self.peek()
                    if t.kind == "sym" and t.text == ",":
                        self.next()
                        continue
                    break
                self.expect_sym("]")
            rows.append(row)
            t = self.peek()
            if t.kind == "sym" and t.text == ",":
                self.next()
                continue
            break
        self.expect_sym("]")
        return rows

    def module_decl(self):
        self.next()
        name_tok = self.expect_name("module name")
        if name_tok is None:
            self.skip_to_semicolon()
            return None
        self.expect_sym("=")
        kw = self.expect_name("coker")
        if kw is not None and kw.text != "coker":
            self.err(kw, "SyntaxError", f"got {kw.text!r}", expected=("coker",))
        kw = self.expect_name("gens")
        if kw is not None and kw.text != "gens":
            self.err(kw, "SyntaxError", f"got {kw.text!r}", expected=("gens",))
        self.expect_sym("[")
        degrees = []
        while True:
            d = self.expect_int()
            if d is None:
                break
            degrees.append(d)
            t = self.peek()
            if t.kind == "sym" and t.text == ",":
                self.next()
                continue
            break
        self.expect_sym("]")
        kw = self.expect_name("rels")
        if kw is not None and kw.text != "rels":
            self.err(kw, "SyntaxError", f"got {kw.text!r}", expected=("rels",))
        rows = self.bracket_rows()
        self.expect_sym(";")
        name = name_tok.text
        if name in self.modules:
            self.err(name_tok, "DuplicateName", f"module {name!r} already declared")
            return None
        if self.current_ring is None:
            self.err(name_tok, "UnknownIdentifier", "no ring declared before module")
            return None
        rels = []
        for j, row in enumerate(rows):
            if len(row) != len(degrees):
                tok = row[0][1] if row else name_tok
                self.err(tok, "SyntaxError",
                         f"relation {j} has {len(row)} entries, expected {len(degrees)}")
                continue
            entries = []
            col_degree = None
            for i, (text, ptok) in enumerate(row):
                entries.append(text)
                p = self.check_poly(text, ptok) if text is not None else None
                if p is None or p.is_zero:
                    continue
                if not p.is_homogeneous(self.weights):
                    self.err(ptok, "InhomogeneousEntry",
                             f"entry ({i},{j}) is not homogeneous")
                    continue
                d = p.degree(self.weights) + degrees[i]
                if col_degree is None:
                    col_degree = d
                elif d != col_degree:
                    self.err(ptok, "InhomogeneousEntry",
                             f"entry ({i},{j}) breaks the relation degree ({d} vs {col_degree})")
            rels.append(tuple(entries))
        decl = ModuleDecl(name, self.current_ring, tuple(degrees), tuple(rels),
                          name_tok.line, name_tok.col)
        self.modules[name] = decl
        return decl

    def map_decl(self):
        self.next()
        name_tok = self.expect_name("map name")
        if name_tok is None:
            self.skip_to_semicolon()
            return None
        self.expect_sym("=")
        src_tok = self.expect_name("source module")
        self.expect_sym("->")
        tgt_tok = self.expect_name("target module")
        rows = self.bracket_rows()
        self.expect_sym(";")
        name = name_tok.text
        if name in self.maps:
            self.err(name_tok, "DuplicateName", f"map {name!r} already declared")
            return None
        src = src_tok.text if src_tok else None
        tgt = tgt_tok.text if tgt_tok else None
        for tok, nm in ((src_tok, src), (tgt_tok, tgt)):
            if nm is not None and nm not in self.modules:
                self.err(tok, "UnknownIdentifier", f"module {nm!r} not declared")
                return None
        sdecl = self.modules[src]
        tdecl = self.modules[tgt]
        if sdecl.ring != tdecl.ring:
            self.err(name_tok, "UnknownIdentifier",
                     f"map endpoints live over different rings")
            return None
        cols = []
        for j, row in enumerate(rows):
            if len(row) != len(tdecl.gen_degrees):
                tok = row[0][1] if row else name_tok
                self.err(tok, "SyntaxError",
                         f"image {j} has {len(row)} entries, expected {len(tdecl.gen_degrees)}")
                continue
            entries = []
            for i, (text, ptok) in enumerate(row):
                entries.append(text)
                p = self.check_poly(text, ptok) if text is not None else None
                if p is None or p.is_zero:
                    continue
                if not p.is_homogeneous(self.weights):
                    self.err(ptok, "InhomogeneousEntry", f"entry ({i},{j}) is not homogeneous")
                    continue
                want = sdecl.gen_degrees[j] - tdecl.gen_degrees[i]
                if p.degree(self.weights) != want:
                    self.err(ptok, "InhomogeneousEntry",
                             f"entry ({i},{j}) must have degree {want}")
            cols.append(tuple(entries))
        if len(cols) != len(sdecl.gen_degrees):
            self.err(name_tok, "SyntaxError",
                     f"map lists {len(cols)} generator images, expected {len(sdecl.gen_degrees)}")
            return None
        decl = MapDecl(name, sdecl.ring, src, tgt, tuple(cols), name_tok.line, name_tok.col)
        self.maps[name] = decl
        return decl

    def query_decl(self):
        self.next()
        op_tok = self.expect_name("query operation")
        if op_tok is None:
            self.skip_to_semicolon()
            return None
        op = op_tok.text
        if op not in QUERY_OPS:
            self.err(op_tok, "SyntaxError", f"unknown query {op!r}",
                     expected=tuple(sorted(QUERY_OPS)))
            self.skip_to_semicolon()
            return None
        args = []
        for kind in QUERY_OPS[op]:
            if kind == "int":
                v = self.expect_int()
                if v is None:
                    self.skip_to_semicolon()
                    return None
                args.append(v)
            else:
                t = self.expect_name(kind + " name")
                if t is None:
                    self.skip_to_semicolon()
                    return None
                table = self.modules if kind == "module" else self.maps
                if t.text not in table:
                    self.err(t, "UnknownIdentifier", f"{kind} {t.text!r} not declared")
                    self.skip_to_semicolon()
                    return None
                args.append(t.text)
        self.expect_sym(";")
        return QueryDecl(op, tuple(args), op_tok.line, op_tok.col)


def parse(text: str) -> SessionAst:
    """Parse a session; raises ParseFailure carrying diagnostics on any error."""
    return _Parser(text).parse()


def format_session(ast: SessionAst) -> str:
    """Canonical textual form; parsing it again is a fixed point."""
    out = ["#! stablehom 1"]
    for d in ast.decls:
        if isinstance(d, RingDecl):
            f = "QQ" if d.field_spec == "qq" else f"GF({d.field_spec[3:]})"
            s = f"ring {d.name} = {f}[{','.join(d.vars)}]"
            if d.ideal:
                s += "/(" + ", ".join(d.ideal) + ")"
            s += " grevlex" if d.order_kind == "degrevlex" else " glex"
            if d.gorenstein:
                s += " gorenstein"
            out.append(s + ";")
        elif isinstance(d, ModuleDecl):
            rels = ",".join("[" + ",".join(r) + "]" for r in d.rels)
            degs = ",".join(str(t) for t in d.gen_degrees)
            out.append(f"module {d.name} = coker gens [{degs}] rels [{rels}];")
        elif isinstance(d, MapDecl):
            cols = ",".join("[" + ",".join(c) + "]" for c in d.cols)
            out.append(f"map {d.name} = {d.source} -> {d.target} [{cols}];")
        elif isinstance(d, QueryDecl):
            out.append("query " + d.echo() + ";")
    return "\n".join(out) + "\n"
