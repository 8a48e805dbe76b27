"""Tokeniser and recursive-descent parser for the three-section problem text.

The file grammar:

    Sorts:
      <ident>.                         % open sort
      <ident> enum: <ident>, ... .     % enumerated sort
      <ident> int: <n> .. <m>.         % bounded integer sort
    Vocabulary:
      predicate { <ident>(<sort>,...). ... }
      function  { <ident>(<sort>,...): <sort>. ... }
      name <ident>: <sort>.
    Constraints:
      <formula>.

Section headers are the literal lines ``Sorts:``, ``Vocabulary:``,
``Constraints:``.  ``%`` starts a comment running to end of line.  Identifiers
are case-sensitive.  Unicode connectives are accepted and normalised to the
ASCII set.  Error recovery resynchronises at ``.`` so several diagnostics can
be reported per run; failed constraint formulas carry a partial parse tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .diagnostics import Diagnostic, error, has_errors
from .syntax import (
    And, Constraint, EnumLit, EnumSort, Eq, Exists, Expr, FalseConst, Forall,
    FunApp, FunctionDecl, Iff, Implies, IntArith, IntCmp, IntLit, IntRangeSort,
    NameDecl, NameRef, Neq, Not, OpenSort, Or, PredApp, PredicateDecl, Problem,
    SortDecl, Span, TrueConst, Var, Vocabulary,
)

RESERVED = {"ALL", "SOME", "true", "false", "enum", "int", "predicate", "function", "name"}

# Unicode operators normalised during tokenisation.
_UNICODE_OPS = {
    "∀": "ALL",   # ∀
    "∃": "SOME",  # ∃
    "∧": "&",     # ∧
    "∨": "|",     # ∨
    "→": "->",    # →
    "↔": "<->",   # ↔
    "¬": "~",     # ¬
    "≠": "/=",    # ≠
    "≤": "<=",    # ≤
    "≥": ">=",    # ≥
    "−": "-",     # −
    "×": "*",     # ×
}

_PUNCT = {
    "<->": "IFF", "->": "ARROW", "/=": "NEQ", "<=": "LE", ">=": "GE",
    "..": "DOTDOT", "&": "AND", "|": "OR", "~": "NOT", "=": "EQ",
    "<": "LT", ">": "GT", "(": "LPAREN", ")": "RPAREN", "{": "LBRACE",
    "}": "RBRACE", ",": "COMMA", ".": "PERIOD", ":": "COLON",
    "+": "PLUS", "-": "MINUS", "*": "STAR",
}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int  # 1-based
    col: int   # 1-based
    pos: int   # character offset into the submitted text
    end: int


class LexError(Exception):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


class ParseError(Exception):
    def __init__(self, message: str, token: Token, hints: tuple[str, ...] = ()):
        super().__init__(message)
        self.message = message
        self.token = token
        self.hints = hints


def tokenize(text: str, start_line: int = 1) -> list[Token]:
    """Turn text into a token list; raises LexError on an illegal character."""
    tokens: list[Token] = []
    line, col = start_line, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        if c == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_i, start_col = i, col
        if c.isalpha():
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
                col += 1
            word = text[start_i:i]
            kind = "QUANT" if word in ("ALL", "SOME") else "IDENT"
            tokens.append(Token(kind, word, line, start_col, start_i, i))
            continue
        if c.isdigit():
            while i < n and text[i].isdigit():
                i += 1
                col += 1
            tokens.append(Token("INT", text[start_i:i], line, start_col, start_i, i))
            continue
        if c in _UNICODE_OPS:
            mapped = _UNICODE_OPS[c]
            i += 1
            col += 1
            kind = "QUANT" if mapped in ("ALL", "SOME") else _PUNCT[mapped]
            tokens.append(Token(kind, mapped, line, start_col, start_i, i))
            continue
        matched = None
        for op in ("<->", "->", "/=", "<=", ">=", ".."):
            if text.startswith(op, i):
                matched = op
                break
        if matched is None and c in _PUNCT:
            matched = c
        if matched is not None:
            i += len(matched)
            col += len(matched)
            tokens.append(Token(_PUNCT[matched], matched, line, start_col, start_i, i))
            continue
        offending = _line_at(text, start_i)
        raise LexError(error(line, start_col, offending, f"Illegal character {c!r}"))
    tokens.append(Token("EOF", "", line, col, n, n))
    return tokens


def _line_at(text: str, pos: int) -> str:
    start = text.rfind("\n", 0, pos) + 1
    end = text.find("\n", pos)
    return text[start:] if end < 0 else text[start:end]


# ---------------------------------------------------------------------------
# Partial parse trees


@dataclass(frozen=True)
class Hole:
    """Placeholder where the parser ran out of input or hit an unexpected token."""


@dataclass
class ParseTree:
    label: str
    children: list["ParseTree"] = field(default_factory=list)


def expr_to_tree(e: Union[Expr, Hole]) -> ParseTree:
    if isinstance(e, Hole) or (isinstance(e, Var) and e.name == " ?"):
        return ParseTree("<?>")
    if isinstance(e, (PredApp, FunApp)):
        return ParseTree(e.name, [expr_to_tree(a) for a in e.args])
    if isinstance(e, (Forall, Exists)):
        kw = "ALL" if isinstance(e, Forall) else "SOME"
        ann = f": {e.sort}" if e.sort else ""
        return ParseTree(f"{kw} {e.var}{ann}", [expr_to_tree(e.body)])
    if isinstance(e, Not):
        return ParseTree("~", [expr_to_tree(e.body)])
    binops = {And: "&", Or: "|", Implies: "->", Iff: "<->", Eq: "=", Neq: "/="}
    for cls, label in binops.items():
        if isinstance(e, cls):
            return ParseTree(label, [expr_to_tree(e.left), expr_to_tree(e.right)])
    if isinstance(e, (IntCmp, IntArith)):
        return ParseTree(e.op, [expr_to_tree(e.left), expr_to_tree(e.right)])
    if isinstance(e, (Var, NameRef, EnumLit)):
        return ParseTree(e.name)
    if isinstance(e, IntLit):
        return ParseTree(str(e.value))
    if isinstance(e, TrueConst):
        return ParseTree("true")
    if isinstance(e, FalseConst):
        return ParseTree("false")
    raise TypeError(f"unexpected node {e!r}")


def render_parse_tree(tree: ParseTree) -> str:
    """Indented one-node-per-line rendering."""
    lines: list[str] = []

    def rec(node: ParseTree, depth: int) -> None:
        lines.append("  " * depth + node.label)
        for child in node.children:
            rec(child, depth + 1)

    rec(tree, 0)
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Identifier resolution context


class ResolveContext:
    """Maps bare identifiers to Var/NameRef/EnumLit and applications to their kind."""

    def __init__(self, sorts: list[SortDecl], vocab: Vocabulary):
        self.sort_names = {s.name for s in sorts}
        self.enum_elements = {
            el for s in sorts if isinstance(s.kind, EnumSort) for el in s.kind.elements
        }
        self.predicates = {p.name for p in vocab.predicates}
        self.functions = {f.name for f in vocab.functions}
        self.names = {n.name for n in vocab.names}

    def resolve_bare(self, ident: str, bound: set[str]) -> Expr:
        if ident in bound:
            return Var(ident)
        if ident in self.names:
            return NameRef(ident)
        if ident in self.enum_elements:
            return EnumLit(ident)
        return Var(ident)  # unknown: treated as a free variable, typecheck reports

    def resolve_app(self, ident: str, args: tuple[Expr, ...]) -> Expr:
        if ident in self.predicates:
            return PredApp(ident, args)
        return FunApp(ident, args)  # declared function or unknown symbol


# ---------------------------------------------------------------------------
# Formula parser


class _FormulaParser:
    """Recursive descent over a token slice.

    In strict mode unexpected input raises ParseError.  In recover mode the
    parser substitutes Hole nodes instead, yielding the partial tree echoed in
    diagnostics.
    """

    def __init__(self, tokens: list[Token], ctx: ResolveContext, recover: bool = False):
        self.tokens = tokens
        self.i = 0
        self.ctx = ctx
        self.recover = recover
        self.bound: set[str] = set()

    @property
    def cur(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.cur
        if t.kind != "EOF":
            self.i += 1
        return t

    def expect(self, kind: str, what: str) -> Optional[Token]:
        if self.cur.kind == kind:
            return self.advance()
        if self.recover:
            return None
        raise ParseError(f"Expected {what} but found {_describe(self.cur)}", self.cur)

    def fail(self, message: str) -> Hole:
        if self.recover:
            return Hole()
        raise ParseError(message, self.cur)

    # level 0: <->, right-assoc
    def formula(self) -> Union[Expr, Hole]:
        parts = [self.implies()]
        while self.cur.kind == "IFF":
            self.advance()
            parts.append(self.implies())
        return _fold_right(Iff, parts)

    # level 1: ->, right-assoc
    def implies(self) -> Union[Expr, Hole]:
        parts = [self.disj()]
        while self.cur.kind == "ARROW":
            self.advance()
            parts.append(self.disj())
        return _fold_right(Implies, parts)

    def disj(self) -> Union[Expr, Hole]:
        f = self.conj()
        while self.cur.kind == "OR":
            self.advance()
            f = Or(_solid(f), _solid(self.conj()))
        return f

    def conj(self) -> Union[Expr, Hole]:
        f = self.unary()
        while self.cur.kind == "AND":
            self.advance()
            f = And(_solid(f), _solid(self.unary()))
        return f

    def unary(self) -> Union[Expr, Hole]:
        if self.cur.kind == "NOT":
            self.advance()
            return Not(_solid(self.unary()))
        if self.cur.kind == "QUANT":
            return self.quantified()
        return self.comparison()

    def quantified(self) -> Union[Expr, Hole]:
        kw = self.advance()
        cls = Forall if kw.text == "ALL" else Exists
        variables: list[str] = []
        tok = self.expect("IDENT", "a variable name")
        if tok is None:
            return Hole()
        variables.append(tok.text)
        while self.cur.kind == "COMMA":
            self.advance()
            tok = self.expect("IDENT", "a variable name")
            if tok is None:
                break
            variables.append(tok.text)
        sort: Optional[str] = None
        if self.cur.kind == "COLON":
            self.advance()
            tok = self.expect("IDENT", "a sort name")
            if tok is not None:
                sort = tok.text
        shadowed = [v for v in variables if v in self.bound]
        self.bound.update(variables)
        body = self.unary()
        self.bound.difference_update(set(variables) - set(shadowed))
        f: Union[Expr, Hole] = _solid(body)
        for v in reversed(variables):
            f = cls(v, sort, f)
        return f

    def comparison(self) -> Union[Expr, Hole]:
        left = self.sum_()
        kind = self.cur.kind
        if kind in ("EQ", "NEQ", "LT", "LE", "GT", "GE"):
            op = self.advance().text
            right = self.sum_()
            if kind == "EQ":
                return Eq(_solid(left), _solid(right))
            if kind == "NEQ":
                return Neq(_solid(left), _solid(right))
            return IntCmp(op, _solid(left), _solid(right))
        return left

    def sum_(self) -> Union[Expr, Hole]:
        t = self.product()
        while self.cur.kind in ("PLUS", "MINUS"):
            op = self.advance().text
            t = IntArith(op, _solid(t), _solid(self.product()))
        return t

    def product(self) -> Union[Expr, Hole]:
        t = self.atom()
        while self.cur.kind == "STAR":
            self.advance()
            t = IntArith("*", _solid(t), _solid(self.atom()))
        return t

    def atom(self) -> Union[Expr, Hole]:
        t = self.cur
        if t.kind == "INT":
            self.advance()
            return IntLit(int(t.text))
        if t.kind == "MINUS" and self.tokens[self.i + 1].kind == "INT":
            self.advance()
            return IntLit(-int(self.advance().text))
        if t.kind == "LPAREN":
            self.advance()
            f = self.formula()
            self.expect("RPAREN", "')'")
            return f
        if t.kind == "IDENT":
            if t.text == "true":
                self.advance()
                return TrueConst()
            if t.text == "false":
                self.advance()
                return FalseConst()
            if t.text in RESERVED:
                return self.fail(f"Reserved word '{t.text}' cannot be used here")
            self.advance()
            if self.cur.kind == "LPAREN":
                self.advance()
                args = self.arguments()
                return self.ctx.resolve_app(t.text, args)
            return self.ctx.resolve_bare(t.text, self.bound)
        return self.fail(f"Expected a formula or term but found {_describe(t)}")

    def arguments(self) -> tuple[Expr, ...]:
        args: list[Expr] = []
        args.append(_solid(self.formula()))
        while self.cur.kind == "COMMA":
            self.advance()
            args.append(_solid(self.formula()))
        if self.expect("RPAREN", "',' or ')' in the argument list") is None:
            args.append(_solid(Hole()))
        return tuple(args)


def _fold_right(cls, parts):
    f = parts[-1]
    for p in reversed(parts[:-1]):
        f = cls(_solid(p), _solid(f))
    return f


_HOLE_MARKER = Var(" ?")  # stands in for Hole inside Expr-typed slots


def _solid(e: Union[Expr, Hole]) -> Expr:
    return _HOLE_MARKER if isinstance(e, Hole) else e


def _describe(t: Token) -> str:
    return "end of input" if t.kind == "EOF" else f"'{t.text}'"


def parse_formula(text: str, problem: Optional[Problem] = None) -> Expr:
    """Parse a single formula (no trailing period); raises Lex/ParseError."""
    ctx = ResolveContext(
        list(problem.sorts) if problem else [],
        problem.vocab if problem else Vocabulary(),
    )
    tokens = tokenize(text)
    p = _FormulaParser(tokens, ctx)
    f = p.formula()
    if p.cur.kind != "EOF":
        raise ParseError(f"Unexpected {_describe(p.cur)} after the formula", p.cur)
    return f


def partial_parse_tree(tokens: list[Token], ctx: ResolveContext) -> str:
    """Best-effort tree for a formula token slice that failed to parse."""
    p = _FormulaParser(tokens, ctx, recover=True)
    f = p.formula()
    return render_parse_tree(expr_to_tree(f))


# ---------------------------------------------------------------------------
# Problem parser


_SECTION_HEADERS = ("Sorts:", "Vocabulary:", "Constraints:")


def parse_problem(text: str) -> Union[Problem, list[Diagnostic]]:
    """Parse the three-section problem text; returns all recoverable diagnostics."""
    diags: list[Diagnostic] = []
    sections = _split_sections(text, diags)
    if sections is None:
        return diags

    try:
        all_tokens: dict[str, list[Token]] = {}
        for name, (line0, chunk, offset) in sections.items():
            toks = tokenize(chunk, start_line=line0)
            all_tokens[name] = [replace(t, pos=t.pos + offset, end=t.end + offset)
                                for t in toks]
    except LexError as e:
        diags.append(e.diagnostic)
        return diags

    sorts = _parse_sorts(all_tokens["Sorts:"], text, diags)
    vocab = _parse_vocabulary(all_tokens["Vocabulary:"], text, sorts, diags)
    ctx = ResolveContext(sorts, vocab)
    constraints = _parse_constraints(all_tokens["Constraints:"], text, ctx, diags)
    if has_errors(diags):
        return diags
    return Problem(tuple(sorts), vocab, tuple(constraints), source=text)


def _split_sections(text: str, diags: list[Diagnostic]):
    lines = text.split("\n")
    positions: dict[str, int] = {}
    for idx, raw in enumerate(lines):
        stripped = raw.split("%", 1)[0].strip()
        if stripped in _SECTION_HEADERS:
            if stripped in positions:
                diags.append(error(idx + 1, 1, raw, f"Duplicate section header '{stripped}'"))
                return None
            positions[stripped] = idx
    missing = [h for h in _SECTION_HEADERS if h not in positions]
    if missing:
        diags.append(error(1, 1, lines[0] if lines else "",
                           f"Missing section header '{missing[0]}' "
                           "(expected the literal lines 'Sorts:', 'Vocabulary:', 'Constraints:')"))
        return None
    order = [positions[h] for h in _SECTION_HEADERS]
    if order != sorted(order):
        diags.append(error(order[0] + 1, 1, lines[order[0]],
                           "Sections must appear in the order Sorts:, Vocabulary:, Constraints:"))
        return None
    for idx in range(positions["Sorts:"]):
        if lines[idx].split("%", 1)[0].strip():
            diags.append(error(idx + 1, 1, lines[idx], "Text before the 'Sorts:' header"))
            return None

    # character offset of the start of each line, for span bookkeeping
    line_offsets = [0]
    for raw in lines[:-1]:
        line_offsets.append(line_offsets[-1] + len(raw) + 1)

    bounds = sorted(positions.items(), key=lambda kv: kv[1])
    out: dict[str, tuple[int, str, int]] = {}
    for k, (header, idx) in enumerate(bounds):
        first = idx + 1
        last = bounds[k + 1][1] if k + 1 < len(bounds) else len(lines)
        chunk = "\n".join(lines[first:last])
        out[header] = (first + 1, chunk, line_offsets[first] if first < len(line_offsets) else len(text))
    return out


class _DeclParser:
    """Shared cursor/recovery over a declaration section's tokens."""

    def __init__(self, tokens: list[Token], text: str, diags: list[Diagnostic]):
        self.tokens = tokens
        self.i = 0
        self.text = text
        self.diags = diags

    @property
    def cur(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.cur
        if t.kind != "EOF":
            self.i += 1
        return t

    def expect(self, kind: str, what: str) -> Token:
        if self.cur.kind == kind:
            return self.advance()
        raise ParseError(f"Expected {what} but found {_describe(self.cur)}", self.cur)

    def expect_ident(self, what: str) -> Token:
        t = self.expect("IDENT", what)
        if t.text in RESERVED:
            raise ParseError(f"Reserved word '{t.text}' cannot be used as {what}", t)
        return t

    def report(self, e: ParseError) -> None:
        self.diags.append(error(e.token.line, e.token.col,
                                _line_at(self.text, e.token.pos), e.message,
                                hints=e.hints))

    def semantic_error(self, tok: Token, message: str) -> None:
        # for checks that fire after the declaration's '.' was consumed:
        # report without resynchronising, the cursor is already well placed
        self.diags.append(error(tok.line, tok.col, _line_at(self.text, tok.pos), message))

    def sync_to_period(self) -> None:
        while self.cur.kind not in ("PERIOD", "EOF"):
            self.advance()
        if self.cur.kind == "PERIOD":
            self.advance()

    def sync_in_block(self) -> None:
        # recover inside a predicate/function block: stop before its '}'
        while self.cur.kind not in ("PERIOD", "EOF", "RBRACE"):
            self.advance()
        if self.cur.kind == "PERIOD":
            self.advance()


def _parse_sorts(tokens: list[Token], text: str, diags: list[Diagnostic]) -> list[SortDecl]:
    p = _DeclParser(tokens, text, diags)
    sorts: list[SortDecl] = []
    seen: set[str] = set()
    while p.cur.kind != "EOF":
        try:
            name_tok = p.expect_ident("a sort name")
            if p.cur.kind == "PERIOD":
                p.advance()
                decl = SortDecl(name_tok.text, OpenSort())
            elif p.cur.kind == "IDENT" and p.cur.text == "enum":
                p.advance()
                p.expect("COLON", "':' after 'enum'")
                elements = [p.expect_ident("an enum element").text]
                while p.cur.kind == "COMMA":
                    p.advance()
                    elements.append(p.expect_ident("an enum element").text)
                p.expect("PERIOD", "'.' after the enum declaration")
                if len(set(elements)) != len(elements):
                    p.semantic_error(name_tok, "Enum elements must be pairwise distinct")
                    continue
                decl = SortDecl(name_tok.text, EnumSort(tuple(elements)))
            elif p.cur.kind == "IDENT" and p.cur.text == "int":
                p.advance()
                p.expect("COLON", "':' after 'int'")
                lo = _parse_int(p)
                p.expect("DOTDOT", "'..' in the integer range")
                hi = _parse_int(p)
                p.expect("PERIOD", "'.' after the integer-range declaration")
                if lo > hi:
                    p.semantic_error(name_tok, f"Empty integer range {lo} .. {hi}")
                    continue
                decl = SortDecl(name_tok.text, IntRangeSort(lo, hi))
            else:
                raise ParseError(
                    f"Expected '.', 'enum:' or 'int:' after sort name but found {_describe(p.cur)}",
                    p.cur)
            if decl.name in seen:
                p.semantic_error(name_tok, f"Duplicate declaration of '{decl.name}'")
                continue
            elements = decl.kind.elements if isinstance(decl.kind, EnumSort) else ()
            clash = next((el for el in elements if el in seen or el == decl.name), None)
            if clash is not None:
                p.semantic_error(name_tok, f"Enum element '{clash}' of sort '{decl.name}' "
                                           "collides with another declared identifier")
                continue
            seen.add(decl.name)
            seen.update(elements)
            sorts.append(decl)
        except ParseError as e:
            p.report(e)
            p.sync_to_period()
    return sorts


def _parse_int(p: _DeclParser) -> int:
    neg = False
    if p.cur.kind == "MINUS":
        p.advance()
        neg = True
    t = p.expect("INT", "an integer")
    return -int(t.text) if neg else int(t.text)


def _parse_vocabulary(tokens: list[Token], text: str, sorts: list[SortDecl],
                      diags: list[Diagnostic]) -> Vocabulary:
    p = _DeclParser(tokens, text, diags)
    sort_names = {s.name for s in sorts}
    enum_elements = {el for s in sorts if isinstance(s.kind, EnumSort) for el in s.kind.elements}
    predicates: list[PredicateDecl] = []
    functions: list[FunctionDecl] = []
    names: list[NameDecl] = []
    declared: set[str] = set()

    def check_symbol(tok: Token) -> bool:
        # runs after the declaration's '.', so report without resynchronising
        if tok.text in declared or tok.text in sort_names or tok.text in enum_elements:
            p.semantic_error(tok, f"Duplicate declaration of '{tok.text}'")
            return False
        declared.add(tok.text)
        return True

    def check_sort(tok: Token) -> str:
        if tok.text not in sort_names:
            raise ParseError(f"Unknown sort '{tok.text}'", tok)
        return tok.text

    def parse_arg_sorts() -> list[str]:
        p.expect("LPAREN", "'(' after the symbol name")
        arg_sorts = [check_sort(p.expect_ident("a sort name"))]
        while p.cur.kind == "COMMA":
            p.advance()
            arg_sorts.append(check_sort(p.expect_ident("a sort name")))
        p.expect("RPAREN", "')' after the argument sorts")
        return arg_sorts

    while p.cur.kind != "EOF":
        try:
            head = p.expect("IDENT", "'predicate', 'function' or 'name'")
            if head.text in ("predicate", "function"):
                want_result = head.text == "function"
                p.expect("LBRACE", f"'{{' after '{head.text}'")
                while p.cur.kind not in ("RBRACE", "EOF"):
                    try:
                        sym = p.expect_ident(f"a {head.text} name")
                        arg_sorts = parse_arg_sorts()
                        if want_result:
                            p.expect("COLON", "':' before the result sort")
                            result = check_sort(p.expect_ident("a sort name"))
                        p.expect("PERIOD", f"'.' after the {head.text} declaration")
                        if check_symbol(sym):
                            if want_result:
                                functions.append(FunctionDecl(sym.text, tuple(arg_sorts), result))
                            else:
                                predicates.append(PredicateDecl(sym.text, tuple(arg_sorts)))
                    except ParseError as e:
                        p.report(e)
                        p.sync_in_block()
                p.expect("RBRACE", f"'}}' closing the {head.text} block")
            elif head.text == "name":
                sym = p.expect_ident("a name")
                p.expect("COLON", "':' before the sort")
                sort = check_sort(p.expect_ident("a sort name"))
                p.expect("PERIOD", "'.' after the name declaration")
                if check_symbol(sym):
                    names.append(NameDecl(sym.text, sort))
            else:
                raise ParseError(
                    f"Expected 'predicate', 'function' or 'name' but found '{head.text}'", head)
        except ParseError as e:
            p.report(e)
            p.sync_to_period()
    return Vocabulary(tuple(predicates), tuple(functions), tuple(names))


def _parse_constraints(tokens: list[Token], text: str, ctx: ResolveContext,
                       diags: list[Diagnostic]) -> list[Constraint]:
    constraints: list[Constraint] = []
    i = 0
    while tokens[i].kind != "EOF":
        # slice out one constraint: tokens up to the terminating period
        j = i
        while tokens[j].kind not in ("PERIOD", "EOF"):
            j += 1
        slice_ = tokens[i:j] + [Token("EOF", "", tokens[j].line, tokens[j].col,
                                      tokens[j].pos, tokens[j].pos)]
        first = tokens[i]
        if len(slice_) == 1:
            diags.append(error(first.line, first.col, _line_at(text, first.pos),
                               "Empty constraint before '.'"))
            i = j + 1 if tokens[j].kind == "PERIOD" else j
            continue
        parser = _FormulaParser(slice_, ctx)
        try:
            f = parser.formula()
            if parser.cur.kind != "EOF":
                raise ParseError(
                    f"Unexpected {_describe(parser.cur)} after the formula", parser.cur)
            if tokens[j].kind != "PERIOD":
                raise ParseError("Expected '.' at the end of the constraint", tokens[j])
            span = Span(first.pos, slice_[-2].end, first.line, first.col)
            constraints.append(Constraint(f, span, len(constraints)))
        except ParseError as e:
            tree = partial_parse_tree(slice_, ctx)
            diags.append(error(e.token.line, e.token.col, _line_at(text, first.pos),
                               e.message, partial_tree=tree,
                               hints=("misplaced parentheses and wrong names",)))
        i = j + 1 if tokens[j].kind == "PERIOD" else j
    return constraints
