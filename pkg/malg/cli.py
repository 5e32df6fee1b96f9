#!/usr/bin/env python3
"""
malg — Finite multialgebras and ordered algebras

Unified CLI entrypoint.
- malg validate: Check a structure file (CABL conditions, lemma suite)
- malg functor: Apply P or A to a structure file
- malg check-hom: Check a map against a morphism contract
- malg enumerate: List every morphism between two structures
- malg roundtrip: Unit and counit isomorphism verdicts
- malg adjunction: Hom-set bijection and naturality
- malg monad: Monad laws of P-tilde
- malg demo: Packaged demonstrations
- malg eval: Evaluate a term
- malg generate: Print a seeded random structure
- malg config: Manage caps and defaults

Exit codes: 0 all verdicts pass, 1 some verdict fails, 2 usage or parse
error, 3 cap exceeded.
"""

import argparse
import logging
import sys
import time
from dataclasses import replace
from pathlib import Path
from typing import Callable, List, Optional, Union

from rich import box
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table
from rich.text import Text

from malg import __version__
from malg.config import ENV_OVERRIDES, VALID_KEYS, Caps, MalgConfig
from malg.core import Signature, Symbol, Universe, Verdict, parse_term
from malg.errors import (
    CapExceededError,
    ContractViolationError,
    MalgError,
    StructureFileError,
    ValidationFailure,
)
from malg.functors import (
    apply_A,
    apply_P,
    check_adjunction,
    check_naturality,
    counit_iso,
    enumerate_ordered_homs,
    reproduce_counterexample,
    unit_iso,
)
from malg.generators import random_multialgebra, random_ordered_algebra, random_partial_multialgebra
from malg.monad import check_monad_laws, check_naturality_eta_eps, check_transformations
from malg.multialg import MultiAlgebra, check_full_hom, check_hom, enumerate_homs, eval_term_nd
from malg.ordalg import (
    FinitePoset,
    OrderedAlgebra,
    check_ordered_hom,
    eval_term_ord,
    lemma_suite,
    validate_cabl,
)
from malg.paths import get_fixture
from malg.report import Report, get_formatter
from malg.structfile import Loaded, MapSpec, TermSpec, dumps, load
from malg.variants import (
    PartialMultiAlgebra,
    SetValuedMorphism,
    apply_P_partial,
    check_mm_hom,
    check_partial_hom,
    empty_signature_mode,
)

logger = logging.getLogger("malg")

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_CAP = 3

HOM_CONTRACTS = ("hom", "full", "ordered", "partial", "mm")


class UsageError(MalgError):
    """Arguments that parse but do not fit together."""


def get_version() -> str:
    """Return package version."""
    try:
        import importlib.metadata
        return importlib.metadata.version("malg")
    except Exception:
        return __version__


def show_splash(version: str) -> None:
    """Display the command overview when malg runs with no args."""
    console = Console()
    console.print()
    header = Text()
    header.append("malg ", style="bold color(43)")
    header.append(f"v{version}\n", style="dim")
    header.append("Finite multialgebras, ordered algebras and the functors between them", style="bold white")
    console.print(header)
    console.print()

    table = Table(
        box=box.SIMPLE_HEAVY,
        border_style="color(240)",
        header_style="bold color(141)",
        padding=(0, 2),
    )
    table.add_column("Command", style="bold white")
    table.add_column("Description", style="white")
    table.add_row("malg validate <file>", "Validate a structure; run the lemma suite on ordered ones")
    table.add_row("malg functor p|a <file>", "Apply P to a multialgebra or A to an ordered algebra")
    table.add_row("malg check-hom", "Check a map file against a morphism contract")
    table.add_row("malg enumerate", "Enumerate homomorphisms or isomorphisms")
    table.add_row("malg roundtrip <file>", "Verify the unit or counit isomorphism")
    table.add_row("malg adjunction <B> <A>", "Verify the Hom-set bijection and its naturality")
    table.add_row("malg monad <file>", "Verify the monad laws of P-tilde")
    table.add_row("malg demo counterexample", "Reproduce the two non-isomorphic multialgebras")
    table.add_row("malg eval --term <t> <file>", "Evaluate a term under a valuation")
    table.add_row("malg config", "Manage caps and defaults")
    console.print(table)
    console.print()
    console.print("  Run [bold white]malg demo counterexample[/] for a first look.")
    console.print()


# --- Plumbing ---

def _setup_logging(verbose: bool) -> None:
    handler = RichHandler(console=Console(stderr=True), show_path=False)
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING,
                        format="%(message)s", handlers=[handler], force=True)


def _caps(parsed: argparse.Namespace) -> Caps:
    caps = MalgConfig().caps(parsed.cap)
    if parsed.seed is not None:
        caps = replace(caps, seed=parsed.seed)
    logger.debug("effective caps: %s", caps)
    return caps


def _output_format(parsed: argparse.Namespace) -> str:
    if parsed.json:
        return "json"
    configured = MalgConfig().get_effective("output_format")
    return configured if configured in ("text", "json") else "text"


def _emit(report: Report, parsed: argparse.Namespace, started: float) -> int:
    report.elapsed = time.perf_counter() - started
    fmt = _output_format(parsed)
    if fmt == "json":
        print(get_formatter("json").format(report))
    else:
        get_formatter("text").render(report, Console())
    return EXIT_PASS if report.ok else EXIT_FAIL


def _load_as(path: Path, caps: Caps, *kinds: type) -> Loaded:
    obj = load(path, caps)
    if kinds and not isinstance(obj, kinds):
        names = ", ".join(k.__name__ for k in kinds)
        raise UsageError(f"{path}: expected {names}, got {type(obj).__name__}")
    return obj


def _universe_of(obj: Loaded) -> Universe:
    if isinstance(obj, (MultiAlgebra, PartialMultiAlgebra)):
        return obj.universe
    if isinstance(obj, OrderedAlgebra):
        return obj.carrier
    raise UsageError(f"{type(obj).__name__} has no universe to map")


def _tables_text(m: MultiAlgebra) -> str:
    u = m.universe
    return "; ".join(f"{name}{u.format_tuple(args)} = {u.format_mask(mask)}" for name, args, mask in m.entries())


def _parse_signature(text: str) -> Signature:
    symbols = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        name, _, arity = part.partition("/")
        if not arity.isdigit():
            raise UsageError(f"Invalid symbol {part!r}: expected name/arity")
        symbols.append(Symbol(name, int(arity)))
    return Signature(tuple(symbols))


def _split_top_level(text: str) -> list[str]:
    """Split on commas outside braces."""
    parts, depth, current = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
            continue
        depth += {"{": 1, "}": -1}.get(ch, 0)
        current.append(ch)
    parts.append("".join(current))
    return [p.strip() for p in parts if p.strip()]


def _parse_bindings(text: str, universe: Universe) -> dict[str, int]:
    bindings = {}
    for part in _split_top_level(text or ""):
        name, sep, label = part.partition("=")
        if not sep:
            raise UsageError(f"Invalid binding {part!r}: expected name=element")
        if label.strip() not in universe:
            raise UsageError(f"Unknown element {label.strip()!r} in binding {part!r}")
        bindings[name.strip()] = universe.index(label.strip())
    return bindings


# --- Commands ---

def cmd_validate(parsed: argparse.Namespace) -> int:
    """Validate a structure file."""
    started = time.perf_counter()
    caps = _caps(parsed)
    report = Report(f"validate {parsed.file}")
    try:
        obj = _load_as(parsed.file, caps, MultiAlgebra, PartialMultiAlgebra, FinitePoset, OrderedAlgebra)
    except ValidationFailure as exc:
        report.add(exc.verdict)
        return _emit(report, parsed, started)

    if isinstance(obj, (MultiAlgebra, PartialMultiAlgebra)):
        entries = sum(1 for _ in obj.entries())
        report.add(Verdict.passed(obj.kind, checked=entries, detail=f"{obj.size} elements"))
        if not len(obj.signature):
            report.verdicts += empty_signature_mode(obj, caps)
        elif isinstance(obj, PartialMultiAlgebra):
            lifted = apply_P_partial(obj, caps)
            report.add(Verdict.passed("caba", checked=lifted.size, detail="P with bottom"))
    elif isinstance(obj, OrderedAlgebra):
        report.add(Verdict.passed("cabl", checked=obj.size, exhaustive=not obj.certificate.sampled,
                                  detail=f"{obj.certificate.num_atoms} atoms"))
        report.add(Verdict.passed("ordered algebra", checked=obj.size))
        report.verdicts += lemma_suite(obj.poset, obj, caps)
    else:
        try:
            cert = validate_cabl(obj, caps)
        except ValidationFailure as exc:
            report.add(exc.verdict)
            return _emit(report, parsed, started)
        report.add(Verdict.passed("cabl", checked=obj.size, exhaustive=not cert.sampled,
                                  detail=f"{cert.num_atoms} atoms"))
        report.verdicts += lemma_suite(obj, caps=caps)
    return _emit(report, parsed, started)


def cmd_functor(parsed: argparse.Namespace) -> int:
    """Apply P or A and print the result as a structure file."""
    started = time.perf_counter()
    caps = _caps(parsed)
    report = Report(f"functor {parsed.which} {parsed.file}")
    result: Union[MultiAlgebra, OrderedAlgebra]
    if parsed.which == "p":
        source = _load_as(parsed.file, caps, MultiAlgebra, PartialMultiAlgebra)
        result = apply_P_partial(source, caps) if isinstance(source, PartialMultiAlgebra) \
            else apply_P(source, caps)
        report.add(Verdict.passed("cabl", checked=result.size, detail=f"{result.certificate.num_atoms} atoms"))
    else:
        source = _load_as(parsed.file, caps, OrderedAlgebra)
        result = apply_A(source)
        report.add(Verdict.passed("multialgebra", checked=result.size))
    report.counts["elements"] = result.size
    text = dumps(result)
    if parsed.output:
        parsed.output.write_text(text, encoding="utf-8")
        report.notes.append(f"written to {parsed.output}")
    elif _output_format(parsed) == "json":
        report.notes.append(text)
    else:
        sys.stdout.write(text)
    return _emit(report, parsed, started)


def _bind_map(spec: MapSpec, source: Universe, target: Universe, set_valued: bool):
    bound = spec.bind(source, target)
    if set_valued:
        return bound if isinstance(bound, SetValuedMorphism) else SetValuedMorphism.from_morphism(bound)
    if isinstance(bound, SetValuedMorphism):
        if not bound.is_singleton_valued():
            raise UsageError("a set-valued map needs --contract mm")
        return bound.collapse()
    return bound


def cmd_check_hom(parsed: argparse.Namespace) -> int:
    """Check a map file against a contract."""
    started = time.perf_counter()
    caps = _caps(parsed)
    report = Report(f"check-hom --contract {parsed.contract} {parsed.map} {parsed.src} {parsed.dst}")
    spec = _load_as(parsed.map, caps, MapSpec)
    if parsed.contract == "ordered":
        src = _load_as(parsed.src, caps, OrderedAlgebra)
        dst = _load_as(parsed.dst, caps, OrderedAlgebra)
    elif parsed.contract == "partial":
        src = _load_as(parsed.src, caps, MultiAlgebra, PartialMultiAlgebra)
        dst = _load_as(parsed.dst, caps, MultiAlgebra, PartialMultiAlgebra)
    else:
        src = _load_as(parsed.src, caps, MultiAlgebra)
        dst = _load_as(parsed.dst, caps, MultiAlgebra)

    h = _bind_map(spec, _universe_of(src), _universe_of(dst), parsed.contract == "mm")
    checkers: dict[str, Callable[..., Verdict]] = {
        "hom": check_hom,
        "full": check_full_hom,
        "partial": check_partial_hom,
        "mm": check_mm_hom,
        "ordered": lambda f, s, d: check_ordered_hom(f, s, d, caps=caps),
    }
    report.add(checkers[parsed.contract](h, src, dst))
    return _emit(report, parsed, started)


def cmd_enumerate(parsed: argparse.Namespace) -> int:
    """Enumerate morphisms between two structures."""
    started = time.perf_counter()
    caps = _caps(parsed)
    report = Report(f"enumerate --contract {parsed.contract} --mode {parsed.mode} {parsed.src} {parsed.dst}")
    if parsed.contract == "ordered":
        if parsed.mode == "full":
            raise UsageError("mode 'full' applies to multialgebras only")
        src = _load_as(parsed.src, caps, OrderedAlgebra)
        dst = _load_as(parsed.dst, caps, OrderedAlgebra)
        found = enumerate_ordered_homs(src, dst, parsed.mode, caps)
    else:
        src = _load_as(parsed.src, caps, MultiAlgebra)
        dst = _load_as(parsed.dst, caps, MultiAlgebra)
        found = enumerate_homs(src, dst, parsed.mode, caps)
    report.add(Verdict.passed("enumerate", checked=len(found), detail=f"{len(found)} found"))
    report.counts["morphisms"] = len(found)
    for h in found:
        report.notes.append(", ".join(f"{k} -> {v}" for k, v in h.as_labels().items()))
    return _emit(report, parsed, started)


def cmd_roundtrip(parsed: argparse.Namespace) -> int:
    """Unit isomorphism for multialgebras, counit isomorphism for ordered algebras."""
    started = time.perf_counter()
    caps = _caps(parsed)
    report = Report(f"roundtrip {parsed.file}")
    obj = _load_as(parsed.file, caps, MultiAlgebra, OrderedAlgebra)
    h, verdict = unit_iso(obj, caps) if isinstance(obj, MultiAlgebra) else counit_iso(obj, caps)
    report.add(verdict)
    report.notes.append(", ".join(f"{k} -> {v}" for k, v in h.as_labels().items()))
    return _emit(report, parsed, started)


def cmd_adjunction(parsed: argparse.Namespace) -> int:
    """Hom-set bijection for (B, A) and naturality over their endomorphisms."""
    started = time.perf_counter()
    caps = _caps(parsed)
    report = Report(f"adjunction {parsed.b} {parsed.a}")
    b = _load_as(parsed.b, caps, OrderedAlgebra)
    a = _load_as(parsed.a, caps, MultiAlgebra)
    report.add(check_adjunction(b, a, caps))
    endo_a = enumerate_homs(a, a, "hom", caps)
    endo_b = enumerate_ordered_homs(b, b, "hom", caps)
    report.counts["endomorphisms of A"] = len(endo_a)
    report.counts["endomorphisms of B"] = len(endo_b)
    squares = 0
    for h in endo_a:
        for h_prime in endo_b:
            squares += 1
            verdict = check_naturality(h, h_prime, a, a, b, b, caps)
            if not verdict.ok:
                report.add(verdict)
                return _emit(report, parsed, started)
    report.add(Verdict.passed("naturality", checked=squares, detail=f"{squares} squares"))
    return _emit(report, parsed, started)


def cmd_monad(parsed: argparse.Namespace) -> int:
    """Monad laws of P-tilde on a multialgebra."""
    started = time.perf_counter()
    caps = _caps(parsed)
    report = Report(f"monad {parsed.file}")
    m = _load_as(parsed.file, caps, MultiAlgebra)
    report.verdicts += check_transformations(m, caps)
    report.add(check_monad_laws(m, caps))
    endos = enumerate_homs(m, m, "hom", caps)
    failed = next((v for v in (check_naturality_eta_eps(h, m, m, caps) for h in endos) if not v.ok), None)
    report.add(failed or Verdict.passed("eta/epsilon naturality", checked=len(endos),
                                        detail=f"{len(endos)} endomorphisms"))
    return _emit(report, parsed, started)


def cmd_demo(parsed: argparse.Namespace) -> int:
    """Packaged demonstrations."""
    started = time.perf_counter()
    caps = _caps(parsed)
    report = Report(f"demo {parsed.name}")
    a = _load_as(get_fixture("counterexample-a", parsed.base_path), caps, MultiAlgebra)
    b = _load_as(get_fixture("counterexample-b", parsed.base_path), caps, MultiAlgebra)
    result = reproduce_counterexample(a, b, caps)
    report.verdicts += result.verdicts()
    report.counts["maps A -> B"] = result.maps_examined
    report.counts["multialgebra isomorphisms"] = len(result.multialgebra_isos)
    report.counts["plain isomorphisms"] = len(result.plain_isos)
    report.counts["ordered isomorphisms"] = len(result.ordered_isos)
    report.notes.append("A: " + _tables_text(result.a))
    report.notes.append("B: " + _tables_text(result.b))
    report.notes.append("plain iso h: " + ", ".join(
        f"{k} -> {v}" for k, v in result.exhibited.as_labels().items()))
    return _emit(report, parsed, started)


def cmd_eval(parsed: argparse.Namespace) -> int:
    """Evaluate a term in a multialgebra or ordered algebra."""
    started = time.perf_counter()
    caps = _caps(parsed)
    if parsed.term_file is not None:
        term_text = _load_as(parsed.term_file, caps, TermSpec).text
        report = Report(f"eval --term-file {parsed.term_file} {parsed.file}")
    else:
        term_text = parsed.term
        report = Report(f"eval --term {term_text} {parsed.file}")
    obj = _load_as(parsed.file, caps, MultiAlgebra, OrderedAlgebra)
    universe = _universe_of(obj)
    term, names = parse_term(term_text, obj.signature)
    bindings = _parse_bindings(parsed.val, universe)
    missing = [n for n in names if n not in bindings]
    if missing:
        raise UsageError(f"unbound variable(s): {', '.join(missing)}")
    valuation = {i: bindings[n] for i, n in enumerate(names)}

    if isinstance(obj, MultiAlgebra):
        outcome = eval_term_nd(obj, term, valuation)
        shown = universe.format_mask(outcome.bits)
        try:
            lifted = apply_P(obj, caps)
        except CapExceededError as exc:
            logger.info("skipping term bridge: %s", exc)
            report.notes.append(f"term bridge skipped: {exc}")
        else:
            ordered = eval_term_ord(lifted, term, {i: (1 << v) - 1 for i, v in valuation.items()})
            if ordered + 1 == outcome.bits:
                report.add(Verdict.passed("term bridge", checked=1, detail="P evaluation agrees"))
            else:
                report.add(Verdict.failed("term bridge", "mismatch", {
                    "multialgebra": shown, "ordered": lifted.carrier.label(ordered)}))
    else:
        shown = universe.label(eval_term_ord(obj, term, valuation))
    report.add(Verdict.passed("eval", checked=1, detail=f"{term} = {shown}"))
    return _emit(report, parsed, started)


def cmd_generate(parsed: argparse.Namespace) -> int:
    """Print a seeded random structure file."""
    caps = _caps(parsed)
    signature = _parse_signature(parsed.signature)
    if parsed.kind == "multialgebra":
        obj = random_multialgebra(caps.seed, parsed.size, signature, caps)
    elif parsed.kind == "partial":
        obj = random_partial_multialgebra(caps.seed, parsed.size, signature, caps)
    else:
        obj = random_ordered_algebra(caps.seed, parsed.size, signature, caps=caps)
    text = dumps(obj)
    if parsed.output:
        parsed.output.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_PASS


def cmd_config(parsed: argparse.Namespace) -> int:
    """Manage caps and defaults."""
    console = Console()
    config = MalgConfig()
    action = getattr(parsed, "config_action", None)

    if action == "set":
        try:
            config.set(parsed.key, parsed.value)
            console.print(f"[green]✓[/green] Set [bold]{parsed.key}[/bold]")
            return EXIT_PASS
        except ValueError as e:
            print(f"Error: {e}", file=sys.stderr)
            return EXIT_USAGE

    elif action == "get":
        try:
            value = config.get_effective(parsed.key)
            if value is None:
                console.print(f"[dim]{parsed.key}[/dim]: [italic]not set[/italic]")
            else:
                console.print(f"[bold]{parsed.key}[/bold]: {value}")
            return EXIT_PASS
        except ValueError as e:
            print(f"Error: {e}", file=sys.stderr)
            return EXIT_USAGE

    elif action == "list":
        entries = config.list_all()
        table = Table(
            title="malg configuration",
            box=box.SIMPLE_HEAVY,
            border_style="color(240)",
            header_style="bold color(141)",
            padding=(0, 2),
        )
        table.add_column("Key", style="bold white")
        table.add_column("Value", style="white")
        table.add_column("Source", style="dim")
        for key, entry in entries.items():
            display = entry["display"] or "[italic]not set[/italic]"
            table.add_row(key, display, entry["source"])
        console.print(table)
        return EXIT_PASS

    elif action == "reset":
        config.reset()
        console.print("[green]✓[/green] Configuration reset.")
        return EXIT_PASS

    else:
        console.print("[bold]malg config[/bold]")
        console.print()
        console.print("  malg config list              Show all configuration")
        console.print("  malg config set <key> <value> Set a configuration value")
        console.print("  malg config get <key>         Get a configuration value")
        console.print("  malg config reset             Reset all configuration")
        console.print()
        console.print("[dim]Valid keys:[/dim]")
        for key, desc in VALID_KEYS.items():
            console.print(f"  [bold]{key}[/bold]  {desc}")
        console.print()
        console.print("[dim]Environment variable overrides:[/dim]")
        for env_var, key in ENV_OVERRIDES.items():
            console.print(f"  {env_var:<10} → {key}")
        return EXIT_PASS


def create_parser() -> argparse.ArgumentParser:
    """Create the main argument parser with subcommands."""
    parser = argparse.ArgumentParser(
        prog="malg",
        description="malg - finite multialgebras, ordered algebras and the functors between them",
        epilog="Run 'malg <command> --help' for command-specific help.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {get_version()}")
    parser.add_argument("--cap", type=int, help="Cap on candidate maps (overrides MALG_CAP)")
    parser.add_argument("--seed", type=int, help="Seed for generators and sampled checks")
    parser.add_argument("--json", action="store_true", help="Print the report as JSON")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")

    subparsers = parser.add_subparsers(dest="command", title="commands", metavar="<command>")

    sp_validate = subparsers.add_parser("validate", help="Validate a structure file")
    sp_validate.add_argument("file", type=Path, help="Structure file")
    sp_validate.set_defaults(func=cmd_validate)

    sp_functor = subparsers.add_parser("functor", help="Apply P or A to a structure file")
    sp_functor.add_argument("which", choices=["p", "a"], help="p: multialgebra to ordered; a: back")
    sp_functor.add_argument("file", type=Path, help="Structure file")
    sp_functor.add_argument("-o", "--output", type=Path, help="Write the result here (default: stdout)")
    sp_functor.set_defaults(func=cmd_functor)

    sp_hom = subparsers.add_parser("check-hom", help="Check a map against a morphism contract")
    sp_hom.add_argument("--contract", choices=HOM_CONTRACTS, default="hom", help="Contract (default: hom)")
    sp_hom.add_argument("map", type=Path, help="Morphism file")
    sp_hom.add_argument("src", type=Path, help="Source structure file")
    sp_hom.add_argument("dst", type=Path, help="Target structure file")
    sp_hom.set_defaults(func=cmd_check_hom)

    sp_enum = subparsers.add_parser("enumerate", help="Enumerate morphisms between two structures")
    sp_enum.add_argument("--contract", choices=["multialgebra", "ordered"], default="multialgebra",
                         help="Category (default: multialgebra)")
    sp_enum.add_argument("--mode", choices=["hom", "full", "iso"], default="hom", help="Morphism kind")
    sp_enum.add_argument("src", type=Path, help="Source structure file")
    sp_enum.add_argument("dst", type=Path, help="Target structure file")
    sp_enum.set_defaults(func=cmd_enumerate)

    sp_round = subparsers.add_parser("roundtrip", help="Unit or counit isomorphism verdict")
    sp_round.add_argument("file", type=Path, help="Multialgebra or ordered algebra file")
    sp_round.set_defaults(func=cmd_roundtrip)

    sp_adj = subparsers.add_parser("adjunction", help="Hom-set bijection and naturality")
    sp_adj.add_argument("b", type=Path, help="Ordered algebra file")
    sp_adj.add_argument("a", type=Path, help="Multialgebra file")
    sp_adj.set_defaults(func=cmd_adjunction)

    sp_monad = subparsers.add_parser("monad", help="Monad laws of P-tilde")
    sp_monad.add_argument("file", type=Path, help="Multialgebra file")
    sp_monad.set_defaults(func=cmd_monad)

    sp_demo = subparsers.add_parser("demo", help="Packaged demonstrations")
    sp_demo.add_argument("name", choices=["counterexample"], help="Demonstration")
    sp_demo.add_argument("--base-path", type=Path, help="Directory holding the fixture files")
    sp_demo.set_defaults(func=cmd_demo)

    sp_eval = subparsers.add_parser("eval", help="Evaluate a term")
    sp_eval_term = sp_eval.add_mutually_exclusive_group(required=True)
    sp_eval_term.add_argument("--term", help="Term text, e.g. s(f(x,y))")
    sp_eval_term.add_argument("--term-file", type=Path, help="Structure file of kind term")
    sp_eval.add_argument("--val", default="", help="Bindings, e.g. x=0,y=1")
    sp_eval.add_argument("file", type=Path, help="Multialgebra or ordered algebra file")
    sp_eval.set_defaults(func=cmd_eval)

    sp_gen = subparsers.add_parser("generate", help="Print a seeded random structure")
    sp_gen.add_argument("kind", choices=["multialgebra", "partial", "ordered"], help="Structure kind")
    sp_gen.add_argument("--size", type=int, default=2, help="Elements (atoms for ordered)")
    sp_gen.add_argument("--signature", default="s/1", help="Symbols, e.g. s/1,f/2")
    sp_gen.add_argument("-o", "--output", type=Path, help="Write the structure here (default: stdout)")
    sp_gen.set_defaults(func=cmd_generate)

    sp_config = subparsers.add_parser("config", help="Manage caps and defaults")
    config_sub = sp_config.add_subparsers(dest="config_action", metavar="<action>")

    sp_config_set = config_sub.add_parser("set", help="Set a configuration value")
    sp_config_set.add_argument("key", help="Configuration key")
    sp_config_set.add_argument("value", help="Value to set")

    sp_config_get = config_sub.add_parser("get", help="Get a configuration value")
    sp_config_get.add_argument("key", help="Configuration key")

    config_sub.add_parser("list", help="List all configuration")
    config_sub.add_parser("reset", help="Reset all configuration")

    sp_config.set_defaults(func=cmd_config)

    return parser


def main(args: Optional[List[str]] = None) -> int:
    """Main entry point for the unified CLI."""
    parser = create_parser()
    try:
        parsed = parser.parse_args(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    if not parsed.command:
        if args is None or len(sys.argv) == 1:
            show_splash(get_version())
            return EXIT_PASS
        parser.print_help()
        return EXIT_PASS

    _setup_logging(parsed.verbose)
    try:
        return parsed.func(parsed)
    except CapExceededError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_CAP
    except ContractViolationError as e:
        print(f"Error: {e}", file=sys.stderr)
        if e.verdict is not None:
            print(f"  {e.verdict.describe()}", file=sys.stderr)
        return EXIT_FAIL
    except ValidationFailure as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_FAIL
    except (StructureFileError, MalgError, ValueError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except KeyboardInterrupt:
        print("\nOperation cancelled.", file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())
