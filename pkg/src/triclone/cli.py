"""Command-line front end: a thin client for the HTTP service.

By default the commands run the service in-process (no server needed); pass
``--server http://host:port`` to talk to a running instance instead.  Exit
codes: 0 success, 1 verification failure or criteria/oracle discrepancy,
2 usage or input error, 3 resource cap hit or incomplete result.
"""

from __future__ import annotations

import json
import sys

import click
import httpx

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2
EXIT_CAP = 3


def _make_client(server: str | None):
    if server:
        return httpx.Client(base_url=server, timeout=None)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service.app import create_app

    return TestClient(create_app())


class Context:
    def __init__(self, server: str | None, output_format: str, config: dict):
        self.server = server
        self.output_format = config.get("format", output_format) if output_format is None else output_format
        self.config = config
        self._client = None

    @property
    def client(self):
        if self._client is None:
            self._client = _make_client(self.server)
        return self._client

    def caps_payload(self, overrides: dict) -> dict | None:
        caps = dict(self.config.get("caps", {}))
        caps.update({k: v for k, v in overrides.items() if v is not None})
        return caps or None

    def call(self, path: str, payload: dict) -> dict:
        response = self.client.post(path, json=payload)
        if response.status_code == 409:
            detail = response.json().get("detail", {})
            click.echo(f"error: {detail.get('error', 'resource cap hit')}", err=True)
            sys.exit(EXIT_CAP)
        if response.status_code >= 400:
            try:
                detail = response.json().get("detail", {})
            except ValueError:
                detail = {}
            if isinstance(detail, dict):
                message = detail.get("error") or json.dumps(detail)
            else:
                message = json.dumps(detail)
            click.echo(f"error: {message}", err=True)
            sys.exit(EXIT_USAGE)
        return response.json()

    def emit(self, payload: dict, text_renderer) -> None:
        if self.output_format == "json":
            click.echo(json.dumps(payload, indent=2))
        else:
            text_renderer(payload)


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        click.echo(f"error: cannot read config {path}: {exc}", err=True)
        sys.exit(EXIT_USAGE)


caps_options = [
    click.option("--max-nvars", type=int, default=None, help="Closure variable cap."),
    click.option("--max-arity", "max_generator_arity", type=int, default=None, help="Generator arity cap."),
    click.option("--max-derived", type=int, default=None, help="Derived-set size cap."),
]


def with_caps(fn):
    for option in reversed(caps_options):
        fn = option(fn)
    return fn


@click.group()
@click.option("--server", default=None, help="Base URL of a running service; default runs in-process.")
@click.option("--format", "output_format", type=click.Choice(["text", "json"]), default=None, help="Output format.")
@click.option("--config", "config_path", default=None, help="JSON config file (flags override).")
@click.pass_context
def main(ctx, server, output_format, config_path):
    """Closed classes of three-valued logic: periodic symmetric functions,
    membership criteria, closure oracle, basis classification."""
    config = _load_config(config_path)
    ctx.obj = Context(server or config.get("server"), output_format or config.get("format", "text"), config)


@main.command()
@click.argument("function")
@click.pass_obj
def period(ctx, function):
    """Detect the canonical period of a function literal."""
    data = ctx.call("/period", {"function": function})

    def render(d):
        if d["periodic"]:
            p = d["profile"]
            click.echo(f"periodic n={p['n']} d={p['d']} t={p['t']}")
        else:
            click.echo("not periodic")
        click.echo(f"layers: {','.join(map(str, d['layers'])) or '(none)'}")

    ctx.emit(data, render)


@main.group()
def mkfn():
    """Construct a function and print its literal and properties."""


def _emit_mkfn(ctx, payload):
    data = ctx.call("/mkfn", payload)

    def render(d):
        click.echo(d["literal"])
        if d.get("layers") is not None:
            click.echo(f"layers: {','.join(map(str, d['layers'])) or '(none)'}")
        if d.get("profile"):
            p = d["profile"]
            click.echo(f"canonical profile: (n={p['n']}, d={p['d']}, t={p['t']})")
        if d.get("is_indicator"):
            click.echo("indicator function")

    ctx.emit(data, render)


@mkfn.command("periodic")
@click.option("--n", type=int, required=True)
@click.option("--d", type=int, required=True)
@click.option("--t", type=int, required=True)
@click.pass_obj
def mkfn_periodic(ctx, n, d, t):
    """Layer function with 1-layers d, d+t, ... up to n."""
    _emit_mkfn(ctx, {"kind": "periodic", "n": n, "d": d, "t": t})


@mkfn.command("sym")
@click.option("--n", type=int, required=True)
@click.option("--layers", default="", help="Comma-separated 1-layers, e.g. 0,2,4.")
@click.pass_obj
def mkfn_sym(ctx, n, layers):
    """Symmetric function from an explicit 1-layer list."""
    positions = [int(p) for p in layers.split(",") if p != ""] if layers else []
    _emit_mkfn(ctx, {"kind": "sym", "n": n, "layers": positions})


@mkfn.command("table")
@click.option("--n", type=int, required=True)
@click.option("--bits", required=True, help="Hex table over {1,2}^n.")
@click.pass_obj
def mkfn_table(ctx, n, bits):
    """General R-function from a hex truth table."""
    _emit_mkfn(ctx, {"kind": "table", "n": n, "bits": bits})


@main.command("eval")
@click.option("--fn", "function", default=None, help="Function literal to evaluate.")
@click.option("--formula", default=None, help="S-expression formula to evaluate.")
@click.option("--sig", "signature_path", default=None, help="Signature file (name := literal).")
@click.option("--nvars", type=int, default=None)
@click.option("--at", "point", required=True, help="Comma-separated tuple over {0,1,2}.")
@click.pass_obj
def eval_cmd(ctx, function, formula, signature_path, nvars, point):
    """Evaluate a function literal or a formula on a tuple."""
    try:
        values = [int(x) for x in point.split(",")]
    except ValueError:
        click.echo("error: --at expects comma-separated integers", err=True)
        sys.exit(EXIT_USAGE)
    signature = ""
    if signature_path:
        try:
            with open(signature_path) as fh:
                signature = fh.read()
        except OSError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_USAGE)
    data = ctx.call(
        "/eval",
        {
            "function": function,
            "formula": formula,
            "signature": signature,
            "nvars": nvars,
            "point": values,
        },
    )
    ctx.emit(data, lambda d: click.echo(str(d["value"])))


@main.command()
@click.option("--f", "f_literal", required=True, help="Target function literal.")
@click.option("--g", "g_literal", required=True, help="Generator function literal.")
@click.option("--with-i", "with_indicators", is_flag=True, help="Allow the indicator family as extra generators.")
@click.option("--oracle", "use_oracle", is_flag=True, help="Decide by the closure oracle instead of the criteria.")
@click.option("--both", "use_both", is_flag=True, help="Run criteria and oracle and require agreement.")
@with_caps
@click.pass_obj
def member(ctx, f_literal, g_literal, with_indicators, use_oracle, use_both, **caps):
    """Decide membership of f in the class generated by g."""
    if use_oracle and use_both:
        click.echo("error: --oracle and --both are mutually exclusive", err=True)
        sys.exit(EXIT_USAGE)
    method = "both" if use_both else "oracle" if use_oracle else "criteria"
    data = ctx.call(
        "/member",
        {
            "f": f_literal,
            "g": g_literal,
            "with_indicators": with_indicators,
            "method": method,
            "caps": ctx.caps_payload(caps),
        },
    )

    def render(d):
        click.echo(f"verdict: {d['verdict']}")
        if d.get("branch"):
            click.echo(f"branch: {d['branch']}")
        if d.get("certificate"):
            click.echo(f"certificate: {d['certificate']}")
        if d.get("reason"):
            click.echo(f"reason: {d['reason']}")
        if d.get("oracle_verdict"):
            click.echo(f"oracle: {d['oracle_verdict']}")
        if d.get("witness"):
            click.echo(f"witness: {d['witness']}")
        if d.get("agreement") is not None:
            click.echo(f"agreement: {'yes' if d['agreement'] else 'DISCREPANCY'}")

    ctx.emit(data, render)
    if data["verdict"] == "incomplete" or data.get("oracle_verdict") == "incomplete":
        sys.exit(EXIT_CAP)
    if use_both and data.get("agreement") is False:
        click.echo("criteria/oracle discrepancy", err=True)
        sys.exit(EXIT_VERIFICATION)


@main.command()
@click.option("--gen", "generators", multiple=True, required=True, help="Generator literal (repeatable).")
@click.option("--nvars", type=int, required=True)
@click.option("--witnesses/--no-witnesses", default=False, help="Print witness formulas.")
@with_caps
@click.pass_obj
def closure(ctx, generators, nvars, witnesses, **caps):
    """Compute the closure of the generators over x1..x_nvars."""
    data = ctx.call(
        "/closure",
        {"generators": list(generators), "nvars": nvars, "caps": ctx.caps_payload(caps)},
    )

    def render(d):
        click.echo(f"derived functions: {d['count']}")
        click.echo(f"rounds: {' -> '.join(map(str, d['round_sizes']))}")
        click.echo("fixpoint reached" if d["complete"] else "INCOMPLETE (cap hit)")
        if witnesses:
            for fn in d["functions"]:
                vars_ = ",".join(f"x{v}" for v in fn["variables"]) or "-"
                click.echo(f"  {fn['table']}  on {vars_}  := {fn['witness']}")

    ctx.emit(data, render)
    if not data["complete"]:
        sys.exit(EXIT_CAP)


@main.command()
@click.option("--formula", required=True, help="S-expression formula.")
@click.option("--sig", "signature_path", default=None, help="Signature file.")
@click.option("--nvars", type=int, required=True)
@click.pass_obj
def theta(ctx, formula, signature_path, nvars):
    """Heads whose replacement by the matching indicator changes the formula."""
    signature = ""
    if signature_path:
        with open(signature_path) as fh:
            signature = fh.read()
    data = ctx.call("/theta", {"formula": formula, "signature": signature, "nvars": nvars})

    def render(d):
        if not d["functions"]:
            click.echo("(empty)")
        for literal in d["functions"]:
            click.echo(literal)
        for occ in d["occurrences"]:
            click.echo(f"  at {tuple(occ['path'])}: {occ['head']}")

    ctx.emit(data, render)


@main.command()
@click.argument("formula")
@click.pass_obj
def rewrite(ctx, formula):
    """Normalize indicator applications in a formula."""
    data = ctx.call("/rewrite", {"formula": formula})
    ctx.emit(data, lambda d: click.echo(d["formula"]))


@main.command()
@click.argument("descriptor", type=click.Path(exists=True))
@click.option("--basis/--no-basis", "extract", default=True, help="Also extract a basis of the finite part.")
@with_caps
@click.pass_obj
def classify(ctx, descriptor, extract, **caps):
    """Classify a family descriptor file: finite, countable, or no basis."""
    try:
        with open(descriptor) as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    data = ctx.call(
        "/classify",
        {"descriptor": payload, "extract_basis": extract, "caps": ctx.caps_payload(caps)},
    )

    def render(d):
        click.echo(f"verdict: {d['verdict']}")
        click.echo(f"witness: {json.dumps(d['witness'])}")
        for item in d["rho_analysis"]:
            click.echo(f"  sequence {item['sequence']}: {item['kind']}, ratio exponent {item['rho_exponent']}")
        for note in d["validation"]["notes"]:
            click.echo(f"  note: {note}")
        if d.get("basis") is not None:
            names = ", ".join(f"(n={p['n']}, d={p['d']}, t={p['t']})" for p in d["basis"])
            click.echo(f"finite-part basis: {names or '(empty)'}")
        if d.get("basis_undecided"):
            click.echo(f"undecided members: {len(d['basis_undecided'])}")

    ctx.emit(data, render)


@main.command()
@click.option("--profile", "profiles", multiple=True, help="Profile as n,d,t (repeatable).")
@click.option("--file", "path", type=click.Path(exists=True), default=None, help="Descriptor JSON; uses its finite part.")
@click.option("--p", "prime", type=int, default=None, help="Require all periods to be powers of this prime.")
@with_caps
@click.pass_obj
def basis(ctx, profiles, path, prime, **caps):
    """Extract an irredundant generating subset of a finite family."""
    items = []
    for text in profiles:
        try:
            n, d, t = (int(x) for x in text.split(","))
        except ValueError:
            click.echo(f"error: --profile expects n,d,t, got {text!r}", err=True)
            sys.exit(EXIT_USAGE)
        items.append({"n": n, "d": d, "t": t})
    if path:
        with open(path) as fh:
            payload = json.load(fh)
        items.extend(payload.get("finite", []))
    if not items:
        click.echo("error: provide --profile or --file", err=True)
        sys.exit(EXIT_USAGE)
    data = ctx.call("/basis", {"profiles": items, "p": prime, "caps": ctx.caps_payload(caps)})

    def render(d):
        names = ", ".join(f"(n={p['n']}, d={p['d']}, t={p['t']})" for p in d["basis"])
        click.echo(f"basis: {names}")
        for item in d["removed"]:
            p = item["profile"]
            click.echo(f"removed (n={p['n']}, d={p['d']}, t={p['t']}): {item['justification']}")
        for item in d["undecided"]:
            p = item["profile"]
            click.echo(f"undecided (n={p['n']}, d={p['d']}, t={p['t']}): {item['reason']}")

    ctx.emit(data, render)
    if data["undecided"]:
        sys.exit(EXIT_CAP)


@main.command()
@click.argument("suite")
@click.option("--seed", type=int, default=None, help="Seed for randomized suites.")
@click.option("--samples", type=int, default=None)
@click.option("--max-n", type=int, default=None)
@click.option("--max-m", type=int, default=None)
@click.option("--max-index", type=int, default=None)
@with_caps
@click.pass_obj
def verify(ctx, suite, seed, samples, max_n, max_m, max_index, **caps):
    """Run a verification suite ('all' runs every suite)."""
    payload = {
        "suite": suite,
        "seed": ctx.config.get("seed", 0) if seed is None else seed,
        "samples": samples if samples is not None else ctx.config.get("samples"),
        "max_n": max_n,
        "max_m": max_m,
        "max_index": max_index,
        "caps": ctx.caps_payload(caps),
    }
    data = ctx.call("/verify", payload)

    def render(d):
        for report in d["reports"]:
            status = "PASS" if report["passed"] else "FAIL"
            click.echo(
                f"{status} {report['suite']} ({report['checks']} checks, "
                f"{len(report['violations'])} violations, seed {report['seed']})"
            )
            for violation in report["violations"][:10]:
                click.echo(f"    {violation}")

    ctx.emit(data, render)
    if not data["passed"]:
        sys.exit(EXIT_VERIFICATION)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("triclone.service.app:app", host=host, port=port)


if __name__ == "__main__":
    main()
