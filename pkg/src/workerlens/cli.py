"""Command-line interface: one verb per pipeline operation.

Exit codes: 0 success, 1 validation/data error, 2 internal error.
``--json`` switches human-readable output to machine-readable documents.
"""

from __future__ import annotations

import datetime as dt
import json
import sys

import click

from . import pipeline
from .learn import ModelSpec, evaluate as run_evaluate
from .features import post_selection_matrix
from .registry import ModelRegistry, NoSuchModel
from .selection import select as run_select
from .simulate import generate_corpus
from .store import EventStore, StoreError, TimeWindow

FAMILY_ALIASES = {
    "rf": "random_forest", "random_forest": "random_forest",
    "ab": "adaboost", "adaboost": "adaboost",
    "svc-linear": "svc_linear", "svc_linear": "svc_linear",
    "svc-poly": "svc_poly", "svc_poly": "svc_poly",
    "svc-rbf": "svc_rbf", "svc_rbf": "svc_rbf",
    "svc-sigmoid": "svc_sigmoid", "svc_sigmoid": "svc_sigmoid",
}

_VALIDATION_ERRORS = (StoreError, pipeline.PipelineError, NoSuchModel, ValueError, KeyError)


def _fail(err: Exception, as_json: bool, code: int):
    if as_json:
        click.echo(json.dumps({"error": str(err), "kind": err.__class__.__name__}), err=True)
    else:
        click.echo(f"error: {err}", err=True)
    sys.exit(code)


def _run(fn, as_json: bool):
    try:
        return fn()
    except _VALIDATION_ERRORS as err:
        _fail(err, as_json, 1)
    except Exception as err:  # internal
        _fail(err, as_json, 2)


def _window(from_, to):
    if from_ is None and to is None:
        return None
    return TimeWindow(from_ if from_ is not None else -1e18,
                      to if to is not None else 1e18)


@click.group()
@click.option("--store", "store_root", default="./data", envvar="STORE_ROOT",
              show_default=True, help="Store root directory.")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.pass_context
def main(ctx, store_root, as_json):
    ctx.obj = {"root": store_root, "json": as_json}


def _echo(ctx, doc, human: str | None = None):
    if ctx.obj["json"] or human is None:
        click.echo(json.dumps(doc, indent=2))
    else:
        click.echo(human)


@main.command()
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_root", default=None, help="Store root (defaults to --store).")
@click.option("--days", default=5, show_default=True)
@click.pass_context
def simulate(ctx, seed, out_root, days):
    """Generate the synthetic worker corpus into a store."""
    def work():
        store = EventStore(out_root or ctx.obj["root"])
        info = generate_corpus(store, days=days, seed=seed)
        store.close()
        return info
    info = _run(work, ctx.obj["json"])
    _echo(ctx, info, f"simulated {info['sessions']} sessions / {info['pieces']} pieces "
                     f"for workers {', '.join(info['workers'])}")


@main.command()
@click.argument("path", type=click.Path(exists=True))
@click.option("--kind", type=click.Choice(["pieces", "sessions"]), required=True)
@click.pass_context
def ingest(ctx, path, kind):
    """Ingest newline-delimited documents from a file."""
    def work():
        store = EventStore(ctx.obj["root"])
        n = 0
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                if kind == "pieces":
                    store.ingest_piece(line)
                else:
                    store.ingest_session(line)
                n += 1
        store.close()
        return {"ingested": n, "kind": kind}
    info = _run(work, ctx.obj["json"])
    _echo(ctx, info, f"ingested {info['ingested']} {kind}")


@main.command()
@click.option("--kind", type=click.Choice(["pieces", "sessions"]), default="pieces",
              show_default=True)
@click.option("--from", "from_", type=float, default=None)
@click.option("--to", type=float, default=None)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.pass_context
def export(ctx, kind, from_, to, out_path):
    """Export stored records to CSV."""
    def work():
        store = EventStore(ctx.obj["root"])
        n = store.export_csv(kind, _window(from_, to), out_path)
        store.close()
        return {"rows": n, "path": out_path}
    info = _run(work, ctx.obj["json"])
    _echo(ctx, info, f"wrote {info['rows']} rows to {out_path}")


def _spec_from_options(model, seed, params):
    family = FAMILY_ALIASES.get(model.lower())
    if family is None:
        raise ValueError(f"unknown model {model!r}; choose from {sorted(set(FAMILY_ALIASES))}")
    hyper = json.loads(params) if params else {}
    return ModelSpec(family=family, hyperparams=hyper, seed=seed)


@main.command()
@click.option("--scenario", type=click.IntRange(1, 2), default=2, show_default=True)
@click.option("--model", default="rf", show_default=True,
              help="rf | ab | svc-linear | svc-poly | svc-rbf | svc-sigmoid")
@click.option("--delta", type=float, default=0.2, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--k", default=10, show_default=True)
@click.option("--params", default=None, help="Hyperparameter overrides as JSON.")
@click.option("--from", "from_", type=float, default=None)
@click.option("--to", type=float, default=None)
@click.option("--report", "show_report", is_flag=True, help="Print the selection report.")
@click.pass_context
def train(ctx, scenario, model, delta, seed, k, params, from_, to, show_report):
    """Train, evaluate and register a model."""
    def work():
        store = EventStore(ctx.obj["root"])
        registry = ModelRegistry(ctx.obj["root"])
        entry = pipeline.train_and_register(store, registry, scenario,
                                            _spec_from_options(model, seed, params),
                                            window=_window(from_, to), delta=delta, k=k)
        store.close()
        return entry
    entry = _run(work, ctx.obj["json"])
    doc = entry.to_doc()
    if not ctx.obj["json"]:
        ev = entry.eval_report
        lines = [f"registered {entry.model_id} (scenario {scenario}, {entry.spec.family})",
                 f"features: {', '.join(entry.feature_names)}",
                 f"accuracy: {ev['accuracy']:.4f}  macro-F: {ev['macro']['f1']:.4f}  "
                 f"time: {ev['total_time_s']:.2f}s"]
        if show_report:
            lines.append(json.dumps(doc["selection"], indent=2))
        click.echo("\n".join(lines))
    else:
        _echo(ctx, doc)


@main.command()
@click.option("--scenario", type=click.IntRange(1, 2), default=2, show_default=True)
@click.option("--model", default="rf", show_default=True)
@click.option("--delta", type=float, default=0.2, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--k", default=10, show_default=True)
@click.option("--params", default=None)
@click.pass_context
def evaluate(ctx, scenario, model, delta, seed, k, params):
    """Cross-validate a model without registering it."""
    def work():
        store = EventStore(ctx.obj["root"])
        spec = _spec_from_options(model, seed, params)
        matrix = pipeline.build_matrix(store, scenario)
        report = run_select(matrix, delta=delta, seed=seed)
        if not report.final:
            raise pipeline.EmptySelection("both selection methods agreed on no feature")
        projected = post_selection_matrix(matrix, report.final)
        result = run_evaluate(spec, projected, k=k)
        store.close()
        return result
    result = _run(work, ctx.obj["json"])
    doc = result.to_doc()
    human = (f"accuracy {doc['accuracy']:.4f}  macro P/R/F "
             f"{doc['macro']['precision']:.4f}/{doc['macro']['recall']:.4f}/{doc['macro']['f1']:.4f}  "
             f"time {doc['total_time_s']:.2f}s\nconfusion {doc['confusion']}")
    _echo(ctx, doc, human)


@main.command()
@click.option("--model-id", default=None, help="Defaults to the latest model.")
@click.option("--record", "record_json", required=True,
              help="Record document as JSON, or @path to a file.")
@click.pass_context
def predict(ctx, model_id, record_json):
    """Predict the expertise class of one record."""
    def work():
        store = EventStore(ctx.obj["root"])
        registry = ModelRegistry(ctx.obj["root"])
        entry = registry.get(model_id) if model_id else registry.latest()
        if entry is None:
            raise pipeline.NoModel("no model registered")
        doc = _load_record(record_json)
        out = pipeline.predict_record(entry, doc)
        store.close()
        return out
    out = _run(work, ctx.obj["json"])
    _echo(ctx, out, f"{out['record_id']}: {out['label']} "
                    f"({out['confidence'] * 100:.0f}% confidence)")


def _load_record(arg: str) -> dict:
    if arg.startswith("@"):
        with open(arg[1:], "r", encoding="utf-8") as fh:
            return json.load(fh)
    return json.loads(arg)


@main.command()
@click.option("--model-id", default=None)
@click.option("--session", "session_id", default=None, help="Stored session id.")
@click.option("--record", "record_json", default=None, help="Ad-hoc record JSON or @file.")
@click.option("--seed", default=0, show_default=True)
@click.pass_context
def explain(ctx, model_id, session_id, record_json, seed):
    """Render the report for a stored session or an ad-hoc record."""
    def work():
        store = EventStore(ctx.obj["root"])
        registry = ModelRegistry(ctx.obj["root"])
        if session_id is not None:
            out = pipeline.session_report(store, registry, session_id,
                                          model_id=model_id, seed=seed)
        elif record_json is not None:
            entry = registry.get(model_id) if model_id else registry.latest()
            if entry is None:
                raise pipeline.NoModel("no model registered")
            out = pipeline.explain_record(store, entry, _load_record(record_json), seed=seed)
        else:
            raise ValueError("provide --session or --record")
        store.close()
        return out
    out = _run(work, ctx.obj["json"])
    _echo(ctx, out, out["report"])


@main.command()
@click.option("--worker", required=True)
@click.option("--date", required=True, help="ISO date, e.g. 2024-01-12.")
@click.pass_context
def kpis(ctx, worker, date):
    """Daily KPI snapshot with both baselines and verdicts."""
    def work():
        store = EventStore(ctx.obj["root"])
        out = pipeline.kpi_payload(store, worker, dt.date.fromisoformat(date))
        store.close()
        return out
    out = _run(work, ctx.obj["json"])
    if ctx.obj["json"]:
        _echo(ctx, out)
    else:
        snap = out["snapshot"]
        lines = [f"{worker} {date}  " + "  ".join(
            f"{k}={snap[k]:g}" for k in ("n_inc", "n_inv", "n_val", "n_task", "t_val", "t_total"))]
        for window in ("intra", "inter"):
            v = out[window]["verdict"]
            lines.append(f"{window}: " + "  ".join(f"{k}:{v[k]}" for k in v))
        click.echo("\n".join(lines))


@main.command()
@click.option("--port", default=8000, show_default=True, envvar="PORT")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.pass_context
def serve(ctx, port, host):
    """Run the HTTP service over the store."""
    import uvicorn

    from .service import create_app

    app = create_app(ctx.obj["root"])
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
