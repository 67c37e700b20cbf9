"""Command line front end.

Each subcommand handles a batch of inputs and reports them in input order.
A failing input produces an error row and the batch goes on.  Exit status is
1 if any check failed, else 2 if any input was unusable, else 0.
"""

from __future__ import annotations

import json
import os
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import click

from .diagram_model import (BraidWord, GaussCode, ParseError, PlanarDiagram, load_fixtures, load_table,
                            parse_diagram, pd_to_gauss_code, perturb, serialize, to_diagram, to_gauss)
from .gauss_engine import reduction_status, structural_checks
from .laurent import Laurent
from .moves import MoveError, reduce_diagram, trivialize_by_loops, whitehead_double
from .polynomials import DEFAULT_SKEIN_BUDGET, BudgetExceeded, conway_alexander
from .positivity import (decide_braid_positive, generate_positive_corpus, knot_invariants,
                         obstruction_report)
from .surfaces_braids import BraidingError, braid_bounds, markov_reduce_positive, vogel_braiding
from .vassiliev import v2_gauss, v3_gauss

BUDGET_ENV = "KNOTPOS_BUDGET"
BRAID_BUDGET_ENV = "KNOTPOS_BRAID_BUDGET"
FORMATS = ("PD", "DT", "GAUSS", "BRAID", "CONWAY")
FAULTS = ("none", "v3-sign")


class InputError(Exception):
    """Unusable input item."""


class CheckFailed(Exception):
    """A verified property does not hold for an input item."""

    def __init__(self, message: str, payload: dict | None = None):
        super().__init__(message)
        self.payload = payload or {}


@dataclass
class RunConfig:
    subcommand: str = ""
    fmt: str = "PD"
    table: str | None = None
    budget: int = DEFAULT_SKEIN_BUDGET
    braid_budget: int | None = None
    output: str = "json"
    seed: int = 0
    names: dict = field(default_factory=dict)
    status: int = 0

    def note(self, code: int) -> None:
        # a check failure outranks an input error
        if code == 1 or (code == 2 and self.status == 0):
            self.status = code


def _env_int(name: str, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value <= 0:
        raise click.BadParameter(f"{name} must be a positive integer, got {raw!r}")
    return value


def to_jsonable(x):
    """Plain JSON data for reports; polynomials keep text and exact terms."""
    if isinstance(x, Laurent):
        half = x.names == ("t",)
        return {"text": x.format(half=half), "terms": {",".join(map(str, e)): c for e, c in x.sorted_terms()}}
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    if isinstance(x, BraidWord):
        return {"n": x.n, "letters": list(x.letters), "text": serialize(x)}
    if isinstance(x, (PlanarDiagram, GaussCode)):
        return serialize(x)
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    return x


def _human(data, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(data, dict):
        if set(data) == {"text", "terms"}:
            return [pad + data["text"]]
        for k in sorted(data):
            v = data[k]
            flat = isinstance(v, list) and not any(isinstance(e, (dict, list)) for e in v)
            if isinstance(v, (dict, list)) and v and not flat and not (isinstance(v, dict) and set(v) == {"text", "terms"}):
                lines.append(f"{pad}{k}:")
                lines.extend(_human(v, indent + 1))
            else:
                shown = v["text"] if isinstance(v, dict) and "text" in v else v
                lines.append(f"{pad}{k}: {shown}")
    elif isinstance(data, list):
        for item in data:
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_human(item, indent + 1))
            else:
                lines.append(f"{pad}- {item}")
    else:
        lines.append(f"{pad}{data}")
    return lines


def _emit(cfg: RunConfig, payload: dict) -> None:
    data = to_jsonable(payload)
    if cfg.output == "json":
        click.echo(json.dumps(data, indent=2, sort_keys=True))
    else:
        click.echo("\n".join(_human(data)))


# ---------------------------------------------------------------- inputs

def _items(cfg: RunConfig, inputs: tuple[str, ...]):
    """Yield (label, value-or-error).  Inputs are fixture or table names,
    files with one presentation per line, or inline presentations."""
    for item in inputs:
        if item in cfg.names:
            yield item, cfg.names[item]
            continue
        path = Path(item)
        if path.is_file():
            for k, line in enumerate(path.read_text().splitlines(), 1):
                body = line.split("#", 1)[0].strip()
                if not body:
                    continue
                try:
                    yield f"{item}:{k}", parse_diagram(cfg.fmt, body)
                except (ParseError, ValueError) as err:
                    yield f"{item}:{k}", InputError(str(err))
            continue
        try:
            yield item, parse_diagram(cfg.fmt, item)
        except (ParseError, ValueError) as err:
            yield item, InputError(str(err))


def _knot(value) -> PlanarDiagram:
    try:
        d = to_diagram(value)
    except (ValueError, TypeError) as err:
        raise InputError(str(err)) from None
    if d.component_count != 1:
        raise InputError(f"expected a knot, got {d.component_count} components")
    return d


def _batch(cfg: RunConfig, inputs, fn) -> list[dict]:
    """Run fn on every input once, isolating failures per input."""
    rows = []
    for label, value in _items(cfg, inputs):
        try:
            if isinstance(value, InputError):
                raise value
            row = fn(value)
        except (InputError, BudgetExceeded, MoveError, BraidingError) as err:
            cfg.note(2)
            row = {"error": str(err), "errorKind": "input"}
        except CheckFailed as err:
            cfg.note(1)
            row = dict(err.payload, error=str(err), errorKind="check")
        rows.append(dict({"input": label}, **row))
    return rows


def _invariants(cfg: RunConfig, d: PlanarDiagram) -> dict:
    try:
        return knot_invariants(d, budget=cfg.budget)
    except AssertionError as err:
        raise CheckFailed(str(err)) from None


def _input_options(fn):
    """Let --format and --table also follow the subcommand."""
    fn = click.option("--table", "sub_table", type=click.Path(exists=True, dir_okay=False), default=None,
                      help="Knot table ingested for this command.")(fn)
    fn = click.option("--format", "sub_fmt", type=click.Choice(FORMATS, case_sensitive=False), default=None,
                      help="Input format, overriding the group option.")(fn)
    return fn


def _apply_inputs(cfg: RunConfig, sub_fmt, sub_table) -> None:
    if sub_fmt:
        cfg.fmt = sub_fmt.upper()
    if sub_table:
        try:
            cfg.names.update(load_table(sub_table))
        except (ParseError, ValueError) as err:
            raise click.BadParameter(f"{sub_table}: {err}", param_hint="--table") from None
        cfg.table = sub_table


# ---------------------------------------------------------------- commands

@click.group()
@click.option("--format", "fmt", type=click.Choice(FORMATS, case_sensitive=False), default="PD",
              show_default=True, help="Format of inline and file inputs.")
@click.option("--table", type=click.Path(exists=True, dir_okay=False),
              help="Knot table with 'name dt-code' lines; names become valid inputs.")
@click.option("--budget", type=click.IntRange(min=1), default=None,
              help=f"Skein crossing cap (default ${BUDGET_ENV} or {DEFAULT_SKEIN_BUDGET}).")
@click.option("--braid-budget", type=click.IntRange(min=1), default=None,
              help=f"Braid search length cap (default ${BRAID_BUDGET_ENV} or 4 min deg V).")
@click.option("--output", type=click.Choice(["json", "human"]), default="json", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.pass_context
def cli(ctx, fmt, table, budget, braid_budget, output, seed):
    """Knot invariants, positivity obstructions and diagram moves."""
    names = load_fixtures()
    if table:
        try:
            names.update(load_table(table))
        except (ParseError, ValueError) as err:
            raise click.BadParameter(f"{table}: {err}", param_hint="--table") from None
    ctx.obj = RunConfig(
        subcommand=ctx.invoked_subcommand or "",
        fmt=fmt.upper(),
        table=table,
        budget=budget or _env_int(BUDGET_ENV, DEFAULT_SKEIN_BUDGET),
        braid_budget=braid_budget or _env_int(BRAID_BUDGET_ENV, None),
        output=output,
        seed=seed,
        names=names,
    )


@cli.command()
@click.argument("inputs", nargs=-1)
@_input_options
@click.pass_obj
def invariants(cfg, inputs, sub_fmt, sub_table):
    """v2, v3, Jones, HOMFLY, Conway/Alexander, signature and Seifert data."""
    _apply_inputs(cfg, sub_fmt, sub_table)
    keep = ("v2", "v3", "V", "P", "conway", "alexander", "signature", "seifert", "c",
            "minDegV", "maxDegV", "spanV", "minCfV", "monic")

    def one(value):
        inv = _invariants(cfg, _knot(value))
        return {k: inv[k] for k in keep}

    _emit(cfg, {"invariants": _batch(cfg, inputs, one)})


@cli.command()
@click.argument("inputs", nargs=-1)
@click.option("--decide/--no-decide", default=False, help="Also search for a positive braid.")
@_input_options
@click.pass_obj
def positivity(cfg, inputs, sub_fmt, sub_table, decide):
    """Positivity and braid-positivity obstruction reports."""
    _apply_inputs(cfg, sub_fmt, sub_table)

    def one(value):
        d = _knot(value)
        inv = _invariants(cfg, d)
        row = {"v2": inv["v2"], "v3": inv["v3"], "report": obstruction_report(inv).as_dict()}
        if decide:
            row["braidPositive"] = decide_braid_positive(d, budget=cfg.braid_budget,
                                                         skein_budget=cfg.budget).as_dict()
        return row

    _emit(cfg, {"positivity": _batch(cfg, inputs, one)})


@cli.command()
@click.argument("inputs", nargs=-1)
@_input_options
@click.pass_obj
def braid(cfg, inputs, sub_fmt, sub_table):
    """Vogel braiding, Markov reduction of positive braids and braid bounds."""
    _apply_inputs(cfg, sub_fmt, sub_table)

    def one(value):
        if isinstance(value, BraidWord):
            b, moves = value, 0
        else:
            out = vogel_braiding(_knot(value))
            b, moves = out["braid"], out["moveCount"]
        row = {"braid": b, "vogelMoves": moves, "bounds": braid_bounds(b)}
        if b.is_positive() and b.closure_components() == 1:
            row["markovReduced"] = markov_reduce_positive(b)
        return row

    _emit(cfg, {"braid": _batch(cfg, inputs, one)})


@cli.command()
@click.argument("inputs", nargs=-1)
@click.option("--mode", type=click.Choice(["reduce", "loops"]), default="reduce", show_default=True)
@_input_options
@click.pass_obj
def moves(cfg, inputs, sub_fmt, sub_table, mode):
    """Reduce a diagram, or trivialize a positive one by loop moves."""
    _apply_inputs(cfg, sub_fmt, sub_table)

    def one(value):
        d = _knot(value)
        if not d.c:
            return {"trace": [], "crossings": 0, "totalSwitches": 0}
        g = to_gauss(d)
        try:
            if mode == "reduce":
                out = reduce_diagram(g)
                return {"trace": out["trace"].as_dict(), "crossings": out["result"].c,
                        "status": reduction_status(out["result"])}
            out = trivialize_by_loops(g)
        except AssertionError as err:
            raise CheckFailed(str(err)) from None
        return {"trace": out["trace"].as_dict(), "totalSwitches": out["totalSwitches"],
                "v2Ledger": out["v2Ledger"], "checks": out["checks"]}

    _emit(cfg, {"moves": _batch(cfg, inputs, one)})


@cli.command()
@click.argument("inputs", nargs=-1)
@click.option("--clasp", type=click.Choice(["+1", "-1"]), default="+1", show_default=True)
@_input_options
@click.pass_obj
def double(cfg, inputs, sub_fmt, sub_table, clasp):
    """Untwisted Whitehead double, checking Delta = 1, v2 = 0 and v3 = +-8 v2(K)."""
    _apply_inputs(cfg, sub_fmt, sub_table)
    sign = int(clasp)

    def one(value):
        d = _knot(value)
        w = whitehead_double(d, sign)
        g = to_gauss(w)
        v2k = v2_gauss(to_gauss(d), check=False) if d.c else 0
        v2w, v3w = v2_gauss(g, check=False), v3_gauss(g, check=False)
        delta = conway_alexander(w)["alexander"]
        checks = {
            "alexanderTrivial": delta == Laurent.const(1, delta.names),
            "v2Zero": v2w == 0,
            "v3EightV2": v3w == 8 * sign * v2k,
        }
        row = {"double": w, "crossings": w.c, "v2": v2w, "v3": v3w, "v2Companion": v2k, "checks": checks}
        if not all(checks.values()):
            raise CheckFailed("double checks failed", row)
        return row

    _emit(cfg, {"double": _batch(cfg, inputs, one)})


# ---------------------------------------------------------------- verification

class _Tally:
    """Pass/fail counts per property, keeping the smallest counterexample."""

    def __init__(self):
        self.props: dict[str, dict] = {}

    def record(self, module: str, name: str, ok: bool, d: PlanarDiagram) -> None:
        p = self.props.setdefault(name, {"module": module, "passed": 0, "failed": 0, "counterexample": None})
        if ok:
            p["passed"] += 1
            return
        p["failed"] += 1
        best = p["counterexample"]
        if best is None or d.c < best["crossings"]:
            p["counterexample"] = {"crossings": d.c, "diagram": serialize(d)}

    def summary(self) -> dict:
        failing = sorted(k for k, v in self.props.items() if v["failed"])
        return {"properties": self.props, "failing": failing,
                "passed": sum(v["passed"] for v in self.props.values()),
                "failed": sum(v["failed"] for v in self.props.values())}


def _v3_function(fault: str):
    if fault == "v3-sign":
        # harness fault: the matcher loses crossing signs of arrows
        return lambda g: abs(v3_gauss(g, check=False))
    return lambda g: v3_gauss(g, check=False)


def _positive_properties(t: _Tally, d: PlanarDiagram, meta: dict, budget: int, v3f) -> None:
    g = to_gauss(d)
    inv = knot_invariants(d, budget=max(budget, d.c), signature=False)
    c, v2, v3, gc = d.c, inv["v2"], v3f(g), meta["gCan"]
    st = reduction_status(g)
    checks = {
        "v3-crossings": ("positivity", not st["isReduced"] or v3 >= c),
        "v3-bireduced-prime": ("positivity", not st["isBireduced"] or st["isComposite"]
                               or v3 >= 4 * ((c - 1) // 2)),
        "v2-quarter": ("positivity", 4 * v2 >= c),
        "v2-quadratic": ("positivity", v3 > v2 and c * (v3 - v2) >= 2 * v2 * v2),
        "v3-v2-crossings": ("positivity", 3 * v3 <= 4 * v2 * c),
        "v3-genus": ("positivity", v3 >= 4 * gc),
        "v2-genus": ("positivity", v2 >= gc),
        "linked-genus": ("positivity", meta["linkedPairs"] >= 3 * gc),
        "five-v2-jones": ("positivity", 5 * v2 >= inv["maxDegV"]),
        "v3-v2-ratio": ("positivity", 3 * v3 >= 8 * v2),
        "v3-homfly": ("positivity", v3 >= 2 * inv["maxDegmP"]),
    }
    try:
        trivialize_by_loops(g)
        loops = True
    except AssertionError:
        loops = False
    checks["loop-accounting"] = ("moves", loops)
    s = structural_checks(g)
    checks["even-valence"] = ("gauss_engine", s["evenValence"])
    checks["double-connectivity"] = ("gauss_engine", s["doubleConnectivity"])
    for name, (module, ok) in checks.items():
        t.record(module, name, ok, d)


def _symmetry_properties(t: _Tally, d: PlanarDiagram, v3f) -> None:
    g, gm = to_gauss(d), to_gauss(d.mirror())
    t.record("vassiliev", "v3-mirror-antisymmetry", v3f(gm) == -v3f(g), d)
    t.record("vassiliev", "v2-mirror-invariance", v2_gauss(gm, check=False) == v2_gauss(g, check=False), d)


def _identity_properties(t: _Tally, d: PlanarDiagram, budget: int, v3f) -> None:
    inv = knot_invariants(d, budget=max(budget, d.c), signature=False)
    g = to_gauss(d) if d.c else None
    v2 = v2_gauss(g, check=False) if g else 0
    v3 = v3f(g) if g else 0
    t.record("vassiliev", "v2-jones-alexander", v2 == inv["v2"] == inv["alexanderSecondDerivative"] / 2, d)
    t.record("vassiliev", "v3-jones", v3 == inv["v3"], d)
    if g:
        s = structural_checks(g)
        t.record("gauss_engine", "even-valence", s["evenValence"], d)
        t.record("gauss_engine", "double-connectivity", s["doubleConnectivity"], d)


def verify_suite(suite: str = "corpus", count: int = 500, seed: int = 0, budget: int = DEFAULT_SKEIN_BUDGET,
                 table: dict | None = None, fault: str = "none") -> dict:
    """Run the property suites and summarize pass/fail counts.

    corpus: theorem inequalities and symmetries over generated positive
    diagrams.  fixtures/table: invariant identities on every named knot up
    to 12 crossings, each with a Reidemeister-perturbed copy."""
    v3f = _v3_function(fault)
    t = _Tally()
    if suite == "corpus":
        for item in generate_positive_corpus(seed, count) if count else []:
            _positive_properties(t, item.diagram, item.meta, budget, v3f)
            _symmetry_properties(t, item.diagram, v3f)
    else:
        rng = random.Random(seed)
        names = load_fixtures() if suite == "fixtures" else (table or {})
        for name in sorted(names):
            d = names[name]
            if d.c > 12:
                continue
            for variant in (d, perturb(d, rng, 2)):
                _identity_properties(t, variant, budget, v3f)
                if variant.c:
                    _symmetry_properties(t, variant, v3f)
    out = t.summary()
    out.update({"suite": suite, "seed": seed, "count": count if suite == "corpus" else len(names)})
    return out


@cli.command()
@click.option("--suite", type=click.Choice(["corpus", "fixtures", "table"]), default="corpus", show_default=True)
@click.option("--count", type=click.IntRange(min=0), default=500, show_default=True)
@click.option("--table", "sub_table", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--fault", type=click.Choice(FAULTS), default="none", hidden=True,
              help="Inject a known fault, to check the suites can fail.")
@click.pass_obj
def verify(cfg, suite, count, sub_table, fault):
    """Theorem suites over the generated corpus, the fixtures or a table."""
    _apply_inputs(cfg, None, sub_table)
    table = None
    if suite == "table":
        if not cfg.table:
            raise click.UsageError("--suite table needs --table")
        table = load_table(cfg.table)
    out = verify_suite(suite, count, cfg.seed, cfg.budget, table, fault)
    if out["failed"]:
        cfg.note(1)
    _emit(cfg, {"verify": out})


@cli.command()
@click.argument("inputs", nargs=-1)
@click.option("--to", "target", type=click.Choice(["PD", "GAUSS", "BRAID"], case_sensitive=False),
              default="PD", show_default=True)
@_input_options
@click.pass_obj
def convert(cfg, inputs, sub_fmt, sub_table, target):
    """Convert presentations to PD, signed Gauss code or a braid word."""
    _apply_inputs(cfg, sub_fmt, sub_table)
    target = target.upper()

    def one(value):
        if target == "GAUSS" and isinstance(value, GaussCode):
            return {"to": target, "text": serialize(value)}
        if target == "PD":
            try:
                return {"to": target, "text": serialize(to_diagram(value))}
            except (ValueError, TypeError) as err:
                raise InputError(str(err)) from None
        d = _knot(value)
        if target == "GAUSS":
            return {"to": target, "text": serialize(pd_to_gauss_code(d))}
        return {"to": target, "text": serialize(vogel_braiding(d)["braid"])}

    _emit(cfg, {"convert": _batch(cfg, inputs, one)})


def run_cli(argv) -> int:
    """Run one command line; returns the exit status."""
    try:
        ctx = cli.make_context("knotpos", list(argv))
        with ctx:
            cli.invoke(ctx)
    except click.exceptions.Exit as err:
        return err.exit_code
    except click.ClickException as err:
        err.show()
        return 2
    except click.exceptions.Abort:
        return 2
    return ctx.obj.status if isinstance(ctx.obj, RunConfig) else 0


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
