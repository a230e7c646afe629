"""FastAPI app wiring the core package to HTTP endpoints.

Input errors map to 422 (parse/validation/domain, with a ``kind`` tag),
hard resource-cap violations to 409; computations that finish under a budget
overrun report ``incomplete`` in the payload instead of failing.
"""

from __future__ import annotations

import inspect

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .. import __version__
from ..config import Caps, CapExceeded, DEFAULT_CAPS
from ..closure import close_cached
from ..criteria import (
    CriterionInapplicable,
    member_single,
    member_single_with_I,
)
from ..closure import member_oracle
from ..families import (
    PeriodicProfile,
    ValidationError,
    classify,
    descriptor_from_dict,
    extract_finite_basis,
)
from ..formulas import (
    Formula,
    format_formula,
    formula_depth,
    formula_size,
    parse_formula,
    parse_signature,
    rewrite_i,
    theta_occurrences,
)
from ..symfun import (
    DomainError,
    ParseError,
    SymmetricFn,
    TableFn,
    as_table,
    detect_period,
    eval_symmetric,
    format_function_literal,
    from_table,
    is_i,
    make_periodic,
    parse_function_literal,
)
from ..verify import SUITES, run_suite, suite_names
from . import models as m


def _caps(override: m.CapsOverride | None) -> Caps:
    if override is None:
        return DEFAULT_CAPS
    try:
        return DEFAULT_CAPS.override(**override.model_dump())
    except ValueError as exc:
        raise DomainError(str(exc)) from None


def _profile_model(prof: PeriodicProfile) -> m.ProfileModel:
    return m.ProfileModel(n=prof.n, d=prof.d, t=prof.t)


def _parse_profile(model: m.ProfileModel) -> PeriodicProfile:
    return PeriodicProfile(model.n, model.d, model.t)


def _check_formula_caps(phi: Formula, caps: Caps) -> None:
    depth = formula_depth(phi)
    if depth > caps.max_formula_depth:
        raise CapExceeded(f"formula depth {depth} exceeds cap {caps.max_formula_depth}")
    size = formula_size(phi)
    if size > caps.max_formula_nodes:
        raise CapExceeded(f"formula has {size} nodes, cap is {caps.max_formula_nodes}")


def create_app() -> FastAPI:
    app = FastAPI(
        title="triclone",
        description="Closed classes of three-valued logic generated by periodic symmetric functions",
        version=__version__,
    )

    def _error(status: int, kind: str):
        async def handler(request, exc):
            return JSONResponse(
                status_code=status, content={"detail": {"kind": kind, "error": str(exc)}}
            )

        return handler

    app.add_exception_handler(ParseError, _error(422, "parse"))
    app.add_exception_handler(ValidationError, _error(422, "validation"))
    app.add_exception_handler(CriterionInapplicable, _error(422, "inapplicable"))
    app.add_exception_handler(DomainError, _error(422, "domain"))
    app.add_exception_handler(CapExceeded, _error(409, "cap"))

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.get("/config", response_model=m.ConfigResponse)
    def config():
        return m.ConfigResponse(
            version=__version__,
            caps=DEFAULT_CAPS.__dict__,
            suites=suite_names(),
        )

    @app.post("/period", response_model=m.PeriodResponse)
    def period(req: m.PeriodRequest):
        fn = parse_function_literal(req.function)
        sym = fn if isinstance(fn, SymmetricFn) else from_table(fn)
        if sym is None:
            raise DomainError("function is not symmetric (some layer is non-constant)")
        prof = detect_period(sym)
        return m.PeriodResponse(
            periodic=prof is not None,
            profile=_profile_model(prof) if prof else None,
            layers=sorted(sym.layer_set),
            is_indicator=is_i(sym),
        )

    @app.post("/mkfn", response_model=m.MakeFnResponse)
    def mkfn(req: m.MakeFnRequest):
        if req.kind == "periodic":
            if req.d is None or req.t is None:
                raise DomainError("periodic needs d and t")
            fn: SymmetricFn | TableFn = make_periodic(req.n, req.d, req.t)
        elif req.kind == "sym":
            layers = [0] * (req.n + 1)
            for pos in req.layers or []:
                if not 0 <= pos <= req.n:
                    raise DomainError(f"layer {pos} out of range 0..{req.n}")
                layers[pos] = 1
            fn = SymmetricFn(req.n, tuple(layers))
        else:
            if req.bits is None:
                raise DomainError("table needs bits")
            try:
                bits = int(req.bits, 16)
            except ValueError:
                raise DomainError(f"bits must be hex, got {req.bits!r}") from None
            fn = TableFn(req.n, bits)
        sym = fn if isinstance(fn, SymmetricFn) else from_table(fn)
        prof = detect_period(sym) if sym is not None else None
        table = as_table(fn)
        return m.MakeFnResponse(
            literal=format_function_literal(fn),
            layers=sorted(sym.layer_set) if sym is not None else None,
            profile=_profile_model(prof) if prof else None,
            is_indicator=is_i(fn),
            table_bits=f"{table.bits:x}" if table.arity <= 16 else None,
        )

    @app.post("/eval", response_model=m.EvalResponse)
    def evaluate(req: m.EvalRequest):
        point = tuple(req.point)
        if req.function is not None:
            fn = parse_function_literal(req.function)
            if isinstance(fn, SymmetricFn):
                return m.EvalResponse(value=eval_symmetric(fn, point))
            return m.EvalResponse(value=fn.value(point))
        if req.formula is None:
            raise DomainError("provide a function literal or a formula")
        sig = parse_signature(req.signature or "")
        phi = parse_formula(req.formula)
        _check_formula_caps(phi, DEFAULT_CAPS)
        from ..formulas import eval_formula, check_well_formed

        nvars = req.nvars or len(point)
        if len(point) != nvars:
            raise DomainError(f"point has {len(point)} components, nvars is {nvars}")
        check_well_formed(phi, sig, nvars)
        for a in point:
            if a not in (0, 1, 2):
                raise DomainError(f"components must be in {{0,1,2}}, got {a}")
        return m.EvalResponse(value=eval_formula(phi, sig, point))

    @app.post("/member", response_model=m.MemberResponse)
    def member(req: m.MemberRequest):
        caps = _caps(req.caps)
        f_fn = parse_function_literal(req.f)
        g_fn = parse_function_literal(req.g)
        f_sym = f_fn if isinstance(f_fn, SymmetricFn) else from_table(f_fn)
        g_sym = g_fn if isinstance(g_fn, SymmetricFn) else from_table(g_fn)
        resp = m.MemberResponse(verdict="inapplicable")
        criteria_ran = False
        if req.method in ("criteria", "both"):
            if f_sym is None or g_sym is None:
                if req.method == "criteria":
                    raise CriterionInapplicable("criteria need symmetric periodic functions")
            else:
                f_prof, g_prof = detect_period(f_sym), detect_period(g_sym)
                if f_prof is None or g_prof is None:
                    if req.method == "criteria":
                        raise CriterionInapplicable("criteria need periodic functions")
                else:
                    try:
                        decide = member_single_with_I if req.with_indicators else member_single
                        verdict = decide(f_prof, g_prof)
                        criteria_ran = True
                        resp.verdict = verdict.verdict
                        resp.branch = verdict.branch
                        resp.reason = verdict.reason
                        if verdict.certificate is not None:
                            c = verdict.certificate
                            resp.certificate = m.CertificateModel(t=c.t, q=c.q, k=c.k, s=c.s)
                    except CriterionInapplicable:
                        if req.method == "criteria":
                            raise
        if req.method in ("oracle", "both"):
            gens: list[SymmetricFn | TableFn] = [g_fn]
            if req.with_indicators:
                from ..symfun import i_table

                gens.append(i_table(2))
            oracle = member_oracle(f_fn, gens, caps)
            resp.oracle_verdict = oracle.status
            if oracle.witness is not None:
                resp.witness = format_formula(oracle.witness)
            if req.method == "oracle" or not criteria_ran:
                resp.verdict = oracle.status
            if req.method == "both" and criteria_ran and oracle.status in ("yes", "no"):
                resp.agreement = (resp.verdict == "yes") == (oracle.status == "yes")
        return resp

    @app.post("/closure", response_model=m.ClosureResponse)
    def closure(req: m.ClosureRequest):
        caps = _caps(req.caps)
        gens = [parse_function_literal(text) for text in req.generators]
        state = close_cached(gens, req.nvars, caps)

        def literal(table: TableFn) -> str:
            sym = from_table(table)
            return format_function_literal(sym if sym is not None else table)

        functions = [
            m.DerivedModel(
                table=literal(entry.table),
                variables=[j + 1 for j in range(req.nvars) if entry.mask >> j & 1],
                witness=format_formula(entry.witness),
            )
            for entry in state.entries.values()
        ]
        return m.ClosureResponse(
            complete=state.complete,
            round_sizes=state.round_sizes,
            count=len(state.entries),
            functions=functions,
        )

    @app.post("/theta", response_model=m.ThetaResponse)
    def theta_endpoint(req: m.ThetaRequest):
        caps = _caps(req.caps)
        if req.nvars > caps.max_nvars:
            raise CapExceeded(f"nvars {req.nvars} exceeds cap {caps.max_nvars}")
        sig = parse_signature(req.signature or "")
        phi = parse_formula(req.formula)
        _check_formula_caps(phi, caps)
        occs = theta_occurrences(phi, sig, req.nvars)
        seen: list[str] = []
        for _, head in occs:
            table = sig.resolve(head)
            sym = from_table(table)
            literal = format_function_literal(sym if sym is not None else table)
            if literal not in seen:
                seen.append(literal)
        return m.ThetaResponse(
            functions=seen,
            occurrences=[m.ThetaOccurrence(path=list(path), head=head) for path, head in occs],
        )

    @app.post("/rewrite", response_model=m.RewriteResponse)
    def rewrite(req: m.RewriteRequest):
        phi = parse_formula(req.formula)
        out = rewrite_i(phi)
        return m.RewriteResponse(formula=format_formula(out), changed=out != phi)

    @app.post("/classify", response_model=m.ClassifyResponse)
    def classify_endpoint(req: m.ClassifyRequest):
        desc = descriptor_from_dict(req.descriptor)
        result = classify(desc)
        basis = None
        undecided = None
        if req.extract_basis and desc.finite:
            extraction = extract_finite_basis(list(desc.finite), _caps(req.caps))
            basis = [_profile_model(prof) for prof in extraction.basis]
            undecided = [_profile_model(prof) for prof, _ in extraction.undecided]
        return m.ClassifyResponse(
            verdict=result.verdict,
            witness=result.witness,
            rho_analysis=result.rho_analysis,
            validation=m.ValidationModel(
                ok=result.validation.ok,
                issues=result.validation.issues,
                notes=result.validation.notes,
                prefix_bound=result.validation.prefix_bound,
            ),
            basis=basis,
            basis_undecided=undecided,
        )

    @app.post("/basis", response_model=m.BasisResponse)
    def basis(req: m.BasisRequest):
        profiles = [_parse_profile(model) for model in req.profiles]
        extraction = extract_finite_basis(profiles, _caps(req.caps), p=req.p)
        return m.BasisResponse(
            basis=[_profile_model(prof) for prof in extraction.basis],
            removed=[
                m.RemovedModel(
                    profile=_profile_model(prof),
                    justification=just,
                    witness=format_formula(wit) if wit is not None else None,
                )
                for prof, just, wit in extraction.removed
            ],
            undecided=[
                {"profile": _profile_model(prof).model_dump(), "reason": reason}
                for prof, reason in extraction.undecided
            ],
        )

    @app.post("/verify", response_model=m.VerifyResponse)
    def verify(req: m.VerifyRequest):
        if req.suite != "all" and req.suite not in SUITES:
            raise DomainError(
                f"unknown suite {req.suite!r}; choose from {', '.join(suite_names())}"
            )
        kwargs = {}
        if req.suite != "all":
            accepted = inspect.signature(SUITES[req.suite]).parameters
            for key in ("samples", "max_n", "max_m", "max_index"):
                value = getattr(req, key)
                if value is not None and key in accepted:
                    kwargs[key] = value
            if "caps" in accepted and req.caps is not None:
                kwargs["caps"] = _caps(req.caps)
        reports = run_suite(req.suite, seed=req.seed, **kwargs)
        return m.VerifyResponse(
            passed=all(r.passed for r in reports),
            reports=[
                m.SuiteReportModel(
                    suite=r.suite,
                    seed=r.seed,
                    checks=r.checks,
                    violations=r.violations,
                    passed=r.passed,
                    details=r.details,
                )
                for r in reports
            ],
        )

    return app


app = create_app()
