"""Command-line front end.

Commands read a document file, resolve declared names, call the shared
operation handlers, and print deterministic text.  Exit codes: 0 success (or
"holds"), 1 parse or input error, 2 semantic error (unknown name, unbound
variable, exceeded limit or budget), 3 checked property fails with a witness.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from typing import Optional

from .errors import InternalInconsistencyError, SemanticError
from .graphs import Universe
from .operational import DEFAULT_LIMIT
from .parser import Document, ParseError, parse_document, parse_term
from .service import handlers
from .service.models import GraphResponse
from .syntax import RecSpec, Term

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_SEMANTIC = 2
EXIT_FAILS = 3

DEFAULT_ACTIONS = ("a",)
DEFAULT_MAX_STATES = 1


def _load_document(path: str) -> Document:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", 0, 0) from None
    return parse_document(text)


def _named_term(doc: Document, name: str) -> Term:
    if name in doc.terms:
        return doc.terms[name]
    raise SemanticError(f"no term named {name!r} in the document")


def _term_or_name(doc: Document, text: str) -> Term:
    if text in doc.terms:
        return doc.terms[text]
    return parse_term(text)


def _named_spec(doc: Document, name: str) -> RecSpec:
    if name in doc.specs:
        return doc.specs[name]
    raise SemanticError(f"no spec named {name!r} in the document")


def _universe(args) -> Universe:
    actions = args.actions.split(",") if args.actions else list(DEFAULT_ACTIONS)
    actions = [a.strip() for a in actions if a.strip()]
    max_states = args.max_states if args.max_states else DEFAULT_MAX_STATES
    return handlers.make_universe(actions, max_states)


def _print_graph(resp: GraphResponse, fmt: str) -> None:
    if fmt == "dot":
        print(resp.dot)
    elif fmt == "graph":
        if resp.canonical:
            print(resp.canonical)
    else:
        print(f"states: {resp.num_states}")
        if resp.canonical:
            print(resp.canonical)
        else:
            print("(no transitions)")


def cmd_lts(args) -> int:
    doc = _load_document(args.document)
    resp = handlers.lts(_named_term(doc, args.term), None, None, args.limit)
    _print_graph(resp, args.format)
    return EXIT_OK


def cmd_guarded(args) -> int:
    doc = _load_document(args.document)
    resp = handlers.guarded(_named_spec(doc, args.spec))
    print(resp.description)
    return EXIT_OK


def cmd_bisim(args) -> int:
    doc = _load_document(args.document)
    resp = handlers.bisim(
        _term_or_name(doc, args.left), _term_or_name(doc, args.right), None, args.limit
    )
    if resp.bisimilar:
        print("bisimilar")
        return EXIT_OK
    print("not bisimilar")
    print(f"distinguishing formula: {resp.formula}")
    return EXIT_FAILS


def cmd_solve(args) -> int:
    doc = _load_document(args.document)
    resp = handlers.solve(_named_spec(doc, args.spec), _universe(args), args.budget)
    print(f"{len(resp.solutions)} solution(s) over universe of {resp.universe_size}")
    print(resp.rendered)
    return EXIT_OK


def cmd_check(args) -> int:
    doc = _load_document(args.document)
    if args.equation not in doc.equations:
        raise SemanticError(f"no equation named {args.equation!r} in the document")
    eq = doc.equations[args.equation]
    resp = handlers.check(
        eq, _named_spec(doc, args.spec), _universe(args), args.conditional, args.budget
    )
    print(resp.rendered)
    return EXIT_OK if resp.holds else EXIT_FAILS


def cmd_approx(args) -> int:
    doc = _load_document(args.document)
    resp = handlers.approx(_named_term(doc, args.term), args.depth, args.limit)
    _print_graph(resp, args.format)
    return EXIT_OK


def cmd_compare(args) -> int:
    doc = _load_document(args.document)
    resp = handlers.compare(_named_term(doc, args.term), args.depth, args.limit)
    print(resp.rendered)
    return EXIT_OK if resp.agree else EXIT_FAILS


def cmd_universe(args) -> int:
    resp = handlers.universe_listing(_universe(args))
    print(f"universe over {{{', '.join(resp.actions)}}} with at most "
          f"{resp.max_states} state(s): {resp.size} members")
    for line in resp.members:
        print(line)
    return EXIT_OK


def _corpus_universes(doc: Document) -> list[Universe]:
    bounds = [(list(DEFAULT_ACTIONS), 1)]
    if doc.actions and list(doc.actions) != list(DEFAULT_ACTIONS):
        bounds.append((list(doc.actions), 1))
    return [handlers.make_universe(actions, states) for actions, states in bounds]


def cmd_corpus(args) -> int:
    if args.document:
        doc = _load_document(args.document)
    else:
        text = resources.files("recspec").joinpath("corpus/standard.pa").read_text("utf-8")
        doc = parse_document(text)
    failures = 0
    for name, spec in doc.specs.items():
        print(f"spec {name}: {handlers.guarded(spec).description}")
    for universe in _corpus_universes(doc):
        label = f"U({{{','.join(universe.alphabet)}}},{universe.max_states})"
        for eq_name, eq in doc.equations.items():
            for spec_name, spec in doc.specs.items():
                resp = handlers.check(eq, spec, universe, False, args.budget)
                verdict = "holds" if resp.holds else resp.rendered.splitlines()[0]
                print(f"eq {eq_name} under {spec_name} over {label}: {verdict}")
                if not resp.holds:
                    failures += 1
    if failures:
        print(f"{failures} case(s) FAIL", file=sys.stderr)
        return EXIT_FAILS
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recspec",
        description="Workbench for recursion in basic process algebra over "
                    "finite process graphs modulo strong bisimilarity.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def universe_flags(p):
        p.add_argument("--actions", help="comma-separated alphabet (default: a)")
        p.add_argument("--max-states", type=int, default=None,
                       help="universe state bound (default: 1)")
        p.add_argument("--budget", type=int, default=1_000_000,
                       help="cap on enumerated valuations")

    p = sub.add_parser("lts", help="operational graph of a named term")
    p.add_argument("document")
    p.add_argument("term")
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    p.add_argument("--format", choices=["text", "dot", "graph"], default="text")
    p.set_defaults(func=cmd_lts)

    p = sub.add_parser("guarded", help="guardedness report for a named spec")
    p.add_argument("document")
    p.add_argument("spec")
    p.set_defaults(func=cmd_guarded)

    p = sub.add_parser("bisim", help="strong bisimilarity of two terms")
    p.add_argument("document")
    p.add_argument("left", help="term name or inline term")
    p.add_argument("right", help="term name or inline term")
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    p.set_defaults(func=cmd_bisim)

    p = sub.add_parser("solve", help="compatible valuations of a named spec")
    p.add_argument("document")
    p.add_argument("spec")
    universe_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="does a named equation hold under a spec")
    p.add_argument("document")
    p.add_argument("equation")
    p.add_argument("spec")
    p.add_argument("--conditional", action="store_true",
                   help="evaluate the conditional-equation form instead")
    universe_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("approx", help="depth-n unfolding approximation of a named term")
    p.add_argument("document")
    p.add_argument("term")
    p.add_argument("--depth", type=int, default=0)
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    p.add_argument("--format", choices=["text", "dot", "graph"], default="text")
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("compare", help="operational vs approximation agreement by depth")
    p.add_argument("document")
    p.add_argument("term")
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("universe", help="list a finite universe of process graphs")
    universe_flags(p)
    p.set_defaults(func=cmd_universe)

    p = sub.add_parser("corpus", help="run the regression corpus")
    p.add_argument("document", nargs="?", help="corpus document (default: shipped corpus)")
    p.add_argument("--budget", type=int, default=1_000_000)
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SemanticError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    except InternalInconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        raise


if __name__ == "__main__":
    sys.exit(main())
