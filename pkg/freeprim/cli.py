"""
Command line interface for freeprim.
"""

import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import click

from . import __version__
from .bialg import (
    Presentation,
    check_axioms,
    check_cocommutative,
    counital_filtration,
    format_element,
    gr_bialgebra,
    truncate,
)
from .cache import LayerCache
from .config import Settings
from .errors import (
    EXIT_VERDICT_FALSE,
    EXIT_VERIFIED,
    FreePrimError,
    PreconditionError,
)
from .formats import export_presentation, load_presentation, render_json, write_json
from .freealg import check_free, extract_generators, invert_hilbert, lift_generators_from_gr
from .graded import check_gr_tensor_iso, gr
from .lie import certify_prim_free, lie_generators, primitive_dims, primitives
from .models import MODEL_KINDS, ModelId

logger = logging.getLogger(__name__)

# (exit code, JSON payload, text lines)
Outcome = Tuple[int, Dict[str, Any], List[str]]


@dataclass(frozen=True)
class RunConfig:
    """Validated options of one invocation."""
    model: Optional[str]
    file: Optional[Path]
    max_degree: Optional[int]
    letters: int
    out: Optional[Path]
    cache_dir: Path
    use_cache: bool
    output_format: str
    fqsym_cap: int

    def __post_init__(self) -> None:
        if (self.model is None) == (self.file is None):
            raise PreconditionError("Give exactly one input: --model or --file")
        if self.max_degree is not None and self.max_degree < 1:
            raise PreconditionError(f"-N must be at least 1, got {self.max_degree}")
        if self.model is not None and self.max_degree is None:
            raise PreconditionError("-N/--max-degree is required with --model")

    def load(self) -> Presentation:
        if self.model is not None:
            assert self.max_degree is not None
            return ModelId(self.model, self.max_degree, self.letters).build(self.fqsym_cap)
        assert self.file is not None
        presentation = load_presentation(self.file)
        if self.max_degree is not None:
            presentation = truncate(presentation, self.max_degree)
        if presentation.N < 1:
            raise PreconditionError(f"Presentation '{presentation.name}' stops at degree {presentation.N}")
        return presentation

    def cache(self) -> Optional[LayerCache]:
        return LayerCache(self.cache_dir) if self.use_cache else None


def _config(ctx: click.Context) -> RunConfig:
    options: Dict[str, Any] = ctx.obj["options"]
    settings: Settings = ctx.obj["settings"]
    return RunConfig(
        model=options["model"],
        file=options["file"],
        max_degree=options["max_degree"],
        letters=options["letters"],
        out=options["out"],
        cache_dir=options["cache_dir"] or settings.cache_dir,
        use_cache=not options["no_cache"],
        output_format=options["output_format"],
        fqsym_cap=settings.fqsym_cap,
    )


def _run(ctx: click.Context, compute: Callable[[Presentation, Optional[LayerCache]], Outcome]) -> None:
    """Build the input, run ``compute`` and report; exits with the outcome's code."""
    try:
        cfg = _config(ctx)
        h = cfg.load()
        code, payload, lines = compute(h, cfg.cache())
    except FreePrimError as e:
        click.echo(f"❌ Error: {e.message}", err=True)
        sys.exit(e.exit_code)

    document = {
        "tool": {"name": "freeprim", "version": __version__},
        "model": h.name,
        "N": h.N,
        "input_hash": h.content_hash(),
        **payload,
    }
    if cfg.out is not None:
        write_json(cfg.out, document)
    if cfg.output_format == "text":
        for line in lines:
            click.echo(line)
        mark = "✅" if code == EXIT_VERIFIED else "❌"
        click.echo(f"{mark} {h.name} up to degree {h.N}")
    else:
        click.echo(render_json(document), nl=False)
    sys.exit(code)


def _flag(ok: Optional[bool]) -> str:
    if ok is None:
        return "·"
    return "✅" if ok else "❌"


def _cell(value: Any) -> str:
    return "·" if value is None else str(value)


def _aligned(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> List[str]:
    cells = [list(header)] + [[_cell(value) for value in row] for row in rows]
    widths = [max(len(row[k]) for row in cells) for k in range(len(header))]
    return ["  ".join(text.rjust(width) for text, width in zip(row, widths)) for row in cells]


def input_options(f: Callable[..., Any]) -> Callable[..., Any]:
    decorators = [
        click.option('--model', type=click.Choice(MODEL_KINDS), help='Built-in model to analyse'),
        click.option('--file', 'file', type=click.Path(path_type=Path), help='Presentation JSON file'),
        click.option('-N', '--max-degree', 'max_degree', type=int, help='Truncation degree'),
        click.option('--letters', type=int, default=2, show_default=True, help='Letters of the tensor model'),
        click.option('--out', type=click.Path(path_type=Path), help='Also write the JSON result here'),
        click.option('--cache-dir', type=click.Path(path_type=Path), help='Layer cache directory'),
        click.option('--no-cache', is_flag=True, help='Do not read or write the layer cache'),
        click.option('--format', 'output_format', type=click.Choice(["json", "text"]), default="json",
                     show_default=True, help='Output format on stdout'),
    ]
    for decorator in reversed(decorators):
        f = decorator(f)
    return f


def _store_options(ctx: click.Context, **options: Any) -> None:
    ctx.ensure_object(dict)
    ctx.obj["options"] = options
    ctx.obj.setdefault("settings", Settings.from_env())


@click.group()
@click.option('--verbose', '-v', is_flag=True, help='Enable verbose logging')
@click.pass_context
def cli(ctx: click.Context, verbose: bool) -> None:
    """freeprim - Exact verification that primitives of free bialgebras form a free Lie algebra."""
    if verbose:
        logging.basicConfig(level=logging.DEBUG)
    else:
        logging.basicConfig(level=logging.INFO)
    ctx.ensure_object(dict)
    ctx.obj["settings"] = Settings.from_env()


@cli.command('axioms')
@input_options
@click.pass_context
def axioms_command(ctx: click.Context, **options: Any) -> None:
    """Check the graded bialgebra axioms."""
    _store_options(ctx, **options)

    def compute(h: Presentation, cache: Optional[LayerCache]) -> Outcome:
        report = check_axioms(h)
        lines = [f"{_flag(value)} {name}" for name, value in report.to_dict().items()
                 if isinstance(value, bool) and name != "verdict"]
        for name, witness in sorted(report.witnesses.items()):
            lines.append(f"   {name}: {witness}")
        code = EXIT_VERIFIED if report.verdict else EXIT_VERDICT_FALSE
        return code, {"axioms": report.to_dict()}, lines

    _run(ctx, compute)


@cli.command('tables')
@input_options
@click.pass_context
def tables_command(ctx: click.Context, **options: Any) -> None:
    """Hilbert series, primitive dimensions, filtration layers and generator counts."""
    _store_options(ctx, **options)

    def compute(h: Presentation, cache: Optional[LayerCache]) -> Outcome:
        filtration = counital_filtration(h, cache)
        prim = primitive_dims(h, cache)
        generators = extract_generators(h).multiplicities
        lie = lie_generators(h, cache).multiplicities
        rows = []
        for n in range(h.N + 1):
            rows.append({
                "degree": n,
                "dim_h": h.dim(n),
                "dim_prim": prim[n] if n else None,
                "generators": generators[n] if n else None,
                "lie_generators": lie[n] if n else None,
                "layers": [filtration.layer(n, k).dim for k in range(filtration.bound[n] + 1)],
            })
        lines = _aligned(
            ["n", "dim H", "dim Prim", "v_n", "u_n", "layers"],
            [[r["degree"], r["dim_h"], r["dim_prim"], r["generators"], r["lie_generators"],
              ",".join(str(d) for d in r["layers"])] for r in rows],
        )
        return EXIT_VERIFIED, {"tables": rows}, lines

    _run(ctx, compute)


@cli.command('primitives')
@input_options
@click.pass_context
def primitives_command(ctx: click.Context, **options: Any) -> None:
    """List a basis of the primitive elements in every degree."""
    _store_options(ctx, **options)

    def compute(h: Presentation, cache: Optional[LayerCache]) -> Outcome:
        degrees = []
        lines = []
        for n in range(1, h.N + 1):
            space = primitives(h, n, cache)
            elements = [format_element(h.basis[n], vector) for vector in space.basis]
            degrees.append({"degree": n, "dim": space.dim, "basis": elements, "subspace": space.to_dict()})
            lines.append(f"Prim_{n} (dim {space.dim})")
            lines.extend(f"  • {text}" for text in elements)
        return EXIT_VERIFIED, {"primitives": degrees}, lines

    _run(ctx, compute)


@cli.command('filtration')
@input_options
@click.pass_context
def filtration_command(ctx: click.Context, **options: Any) -> None:
    """Dimensions of the counital filtration and of its associated graded pieces."""
    _store_options(ctx, **options)

    def compute(h: Presentation, cache: Optional[LayerCache]) -> Outcome:
        filtration = counital_filtration(h, cache)
        graded = gr(filtration)
        layers = {f"{n},{k}": d for (n, k), d in sorted(filtration.dims_table().items())}
        rows = [
            [n] + [graded.get(n, k) for k in range(h.N + 1)]
            for n in range(h.N + 1)
        ]
        lines = ["dim Gr(H)(n, k)"] + _aligned(["n"] + [f"k={k}" for k in range(h.N + 1)], rows)
        payload = {"filtration": {"bound": list(filtration.bound), "layers": layers, "gr": graded.to_dict()}}
        return EXIT_VERIFIED, payload, lines

    _run(ctx, compute)


@cli.command('grcheck')
@input_options
@click.pass_context
def grcheck_command(ctx: click.Context, **options: Any) -> None:
    """Build Gr(H) and check it is a cocommutative bialgebra of the same dimensions."""
    _store_options(ctx, **options)

    def compute(h: Presentation, cache: Optional[LayerCache]) -> Outcome:
        graded = gr_bialgebra(h, cache)
        filtration = counital_filtration(h, cache)
        results = {
            "h_cocommutative": check_cocommutative(h).to_dict(),
            "gr_cocommutative": check_cocommutative(graded).to_dict(),
            "gr_axioms": check_axioms(graded).to_dict(),
            "dimensions_preserved": all(graded.dim(n) == h.dim(n) for n in range(h.N + 1)),
            "tensor_compatible": check_gr_tensor_iso(filtration, filtration).to_dict(),
        }
        ok = (
            results["gr_cocommutative"]["ok"]
            and results["gr_axioms"]["verdict"]
            and results["dimensions_preserved"]
            and results["tensor_compatible"]["ok"]
        )
        lines = [
            f"{_flag(results['h_cocommutative']['ok'])} H cocommutative",
            f"{_flag(results['gr_cocommutative']['ok'])} Gr(H) cocommutative",
            f"{_flag(results['gr_axioms']['verdict'])} Gr(H) bialgebra axioms",
            f"{_flag(bool(results['dimensions_preserved']))} dim Gr(H)_n = dim H_n",
            f"{_flag(results['tensor_compatible']['ok'])} Gr(H ⊗ H) = Gr(H) ⊗ Gr(H)",
        ]
        return (EXIT_VERIFIED if ok else EXIT_VERDICT_FALSE), {"grcheck": results}, lines

    _run(ctx, compute)


@cli.command('generators')
@input_options
@click.pass_context
def generators_command(ctx: click.Context, **options: Any) -> None:
    """Extract algebra generators and check freeness by word evaluation."""
    _store_options(ctx, **options)

    def compute(h: Presentation, cache: Optional[LayerCache]) -> Outcome:
        generators = extract_generators(h)
        free = check_free(h, generators)
        payload: Dict[str, Any] = {
            "generators": generators.to_dict(),
            "free": free.to_dict(),
            "hilbert_inverse": list(invert_hilbert(h.dims.dims)),
        }
        lines = [
            f"v_n: {list(generators.multiplicities[1:])}",
            f"{_flag(free.ok)} free as an algebra" + ("" if free.ok else f" ({free.witness})"),
        ]
        if free.ok:
            try:
                lifted = lift_generators_from_gr(h, cache)
                payload["lifted"] = lifted.to_dict()
                lines.append(f"✅ generators lifted from Gr(H): {list(lifted.multiplicities[1:])}")
            except FreePrimError as e:
                payload["lifted"] = {"error": e.message}
                lines.append(f"❌ lift from Gr(H): {e.message}")
        return (EXIT_VERIFIED if free.ok else EXIT_VERDICT_FALSE), payload, lines

    _run(ctx, compute)


@cli.command('certify')
@input_options
@click.pass_context
def certify_command(ctx: click.Context, **options: Any) -> None:
    """Certify that the Lie algebra of primitives is free up to degree N."""
    _store_options(ctx, **options)

    def compute(h: Presentation, cache: Optional[LayerCache]) -> Outcome:
        certificate = certify_prim_free(h, cache)
        lines = [f"{_flag(stage.ok)} {stage.name}" + ("" if stage.ok else f" {stage.witness}")
                 for stage in certificate.stages]
        lines += _aligned(
            ["n", "dim H", "v_n", "dim Prim", "dim [g,g]", "u_n", "Lyndon", "rank", "spans"],
            [[r.degree, r.dim_h, r.generators, r.dim_prim, r.dim_derived, r.lie_generators,
              r.lyndon_count, r.lyndon_rank, _flag(r.spans)] for r in certificate.degrees],
        )
        code = EXIT_VERIFIED if certificate.verdict else EXIT_VERDICT_FALSE
        payload = certificate.to_dict()
        for key in ("tool", "model", "N", "input_hash"):
            payload.pop(key)
        return code, {"certificate": payload}, lines

    _run(ctx, compute)


@cli.command('export')
@input_options
@click.pass_context
def export_command(ctx: click.Context, **options: Any) -> None:
    """Write the input presentation in the presentation file format."""
    _store_options(ctx, **options)
    try:
        cfg = _config(ctx)
        h = cfg.load()
    except FreePrimError as e:
        click.echo(f"❌ Error: {e.message}", err=True)
        sys.exit(e.exit_code)

    if cfg.out is None:
        click.echo(render_json(h.to_dict()), nl=False)
    else:
        export_presentation(h, cfg.out)
        if cfg.output_format == "text":
            click.echo(f"✅ Exported {h.name} up to degree {h.N} to {cfg.out}")
