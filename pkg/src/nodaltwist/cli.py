"""Command-line front end.

    nodaltwist nodal verify [--order N] [--arity K] [--format json]
    nodaltwist fps {compose|invert|flow|log|conjugate|jacobian} ...
    nodaltwist dga {check|reduce|diff} ...
    nodaltwist ainf {check-algebra|check-morphism|transfer|exp} ...
    nodaltwist mc {check|push|homdiff|symmetrize} ...

Exit codes: 0 when every check passes, 1 when a check leaves a nonzero
residual, 2 for bad input.  Wherever a file is expected, ``builtin:NAME``
selects a shipped object instead (``--list-builtins`` prints the names).
The default truncation order is 10; ``NODALTWIST_ORDER`` changes the default
and ``--order`` always wins.
"""

import argparse
import json
import os
import sys

from . import plane
from .ainfty import core, hochschild, samples
from .ainfty.transfer import (Contraction, finite_dga_from_json, finite_dga_to_json,
                              transfer)
from .mc import (MCElement, check_mc, h0_witness, pushforward_mc,
                 symmetrization)
from .ncdga import NCPoly, PresentedDGA, check_consistency
from .nodal import (SCHEMA_VERSION, exp_rho, expected_G_beta, expected_PG_alpha,
                    morphism_G, nodal_presentation, pullback_morphism, verify_pipeline)
from .series import Series2, parse_scalar

ENV_ORDER = "NODALTWIST_ORDER"
DEFAULT_ORDER = 10
DEFAULT_ARITY = 5

BUILTINS = {
    "maps": ["identity", "exp", "cluster"],
    "presentations": ["nodal", "nodal-verbatim"],
    "algebras": ["lambda"] + sorted(samples.synthetic_dgas()),
    "morphisms": ["G", "PG", "identity", "gl2:A,B,C,D"],
    "elements": ["alpha", "beta", "G_beta", "PG_alpha"],
    "gammas": ["exp_rho", "one"],
}


class InputError(Exception):
    """Bad command input; the message names the offending flag or field."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


# -- small helpers -----------------------------------------------------------

def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def env_order():
    raw = os.environ.get(ENV_ORDER)
    if raw is None or raw == "":
        return None
    try:
        v = int(raw)
    except ValueError:
        raise InputError(f"{ENV_ORDER}: expected a positive integer, got {raw!r}") from None
    if v < 1:
        raise InputError(f"{ENV_ORDER}: must be >= 1, got {v}")
    return v


def default_order(args):
    if getattr(args, "order", None) is not None:
        return args.order
    e = env_order()
    return e if e is not None else DEFAULT_ORDER


def _builtin(ref):
    if isinstance(ref, str) and ref.startswith("builtin:"):
        return ref[len("builtin:"):]
    return None


def _read_json(ref, flag):
    try:
        with open(ref) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{flag}: cannot read {ref!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{flag}: malformed JSON in {ref!r}: {exc}") from None


def _wrap(flag, fn, *a):
    try:
        return fn(*a)
    except InputError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{flag}: {_msg(exc)}") from None


def _msg(exc):
    if isinstance(exc, KeyError):
        return f"missing or unknown field {exc}"
    return str(exc)


def emit(args, payload, text):
    if args.format == "json":
        payload = dict(payload)
        payload.setdefault("schema_version", SCHEMA_VERSION)
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(text)


def _status(ok):
    return "PASS" if ok else "FAIL"


# -- loaders -----------------------------------------------------------------

def builtin_map(name, order):
    p, q = Series2.p(order), Series2.q(order)
    s = Series2.monomial(1, 1, order)
    if name == "identity":
        return plane.PlaneMap.identity(order)
    if name == "exp":
        return plane.PlaneMap(p * s.exp(), q * (-s).exp())
    if name == "cluster":
        u = Series2.one(order) - s
        return plane.PlaneMap(p * u, q * u.reciprocal())
    raise InputError(f"unknown builtin map {name!r}; choose from {BUILTINS['maps']}")


def load_map(ref, flag, args):
    name = _builtin(ref)
    if name is not None:
        return builtin_map(name, default_order(args))
    F = _wrap(flag, plane.PlaneMap.from_json, _read_json(ref, flag))
    if args.order is not None and args.order != F.order:
        if args.order > F.order:
            raise InputError(f"{flag}: field 'order' is {F.order}, cannot raise it to --order {args.order}")
        F = F.truncate(args.order)
    return F


def load_presentation(ref, args, flag="--presentation"):
    name = _builtin(ref)
    if name == "nodal":
        dga = nodal_presentation(default_order(args))
    elif name == "nodal-verbatim":
        dga = nodal_presentation(default_order(args), completed=False)
    elif name is not None:
        raise InputError(f"{flag}: unknown builtin presentation {name!r}")
    else:
        dga = _wrap(flag, PresentedDGA.from_json, _read_json(ref, flag))
        if args.order is not None or env_order() is not None:
            dga = dga.with_order(default_order(args))
    for r in dga.rules:
        if getattr(r, "lhs", None) is not None:
            for g in r.lhs:
                if g not in dga.precedence:
                    raise InputError(f"{flag}: rule {'*'.join(r.lhs)} uses unknown generator {g!r}")
    return dga


_ALGEBRAS = {}


def builtin_algebra(name, flag):
    if name in ("lambda", "exterior"):
        return samples.exterior_algebra()
    dgas = samples.synthetic_dgas()
    if name not in dgas:
        raise InputError(f"{flag}: unknown builtin algebra {name!r}; choose from {BUILTINS['algebras']}")
    if name not in _ALGEBRAS:
        _ALGEBRAS[name] = core.from_dga(dgas[name])
    return _ALGEBRAS[name]


def algebra_from_data(data, flag):
    if isinstance(data, str):
        name = _builtin(data)
        return builtin_algebra(name if name is not None else data, flag)
    if not isinstance(data, dict):
        raise InputError(f"{flag}: an algebra must be a JSON object or a builtin name")
    if "mu" in data:
        return _wrap(flag, core.TableAlgebra.from_json, data)
    if "product" in data:
        dga = _wrap(flag, finite_dga_from_json, data)
        return _wrap(flag, core.from_dga, dga)
    if "generators" in data:
        return _wrap(flag, core.from_dga, _wrap(flag, PresentedDGA.from_json, data))
    raise InputError(f"{flag}: algebra JSON needs a 'mu', 'product' or 'generators' field")


def load_algebra(ref, flag="--algebra"):
    name = _builtin(ref)
    if name is not None:
        return builtin_algebra(name, flag)
    return algebra_from_data(_read_json(ref, flag), flag)


def load_finite_dga(ref, flag="--dga"):
    name = _builtin(ref)
    if name is not None:
        dgas = samples.synthetic_dgas()
        if name == "lambda":
            name = "exterior"
        if name not in dgas:
            raise InputError(f"{flag}: unknown builtin dga {name!r}; choose from {sorted(dgas)}")
        return dgas[name]
    return _wrap(flag, finite_dga_from_json, _read_json(ref, flag))


def _tables(data, key, flag):
    try:
        return {int(n): {tuple(e["inputs"]): core.element_from_json(e["output"]) for e in entries}
                for n, entries in data[key].items()}
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        raise InputError(f"{flag}: field {key!r} is malformed: {_msg(exc)}") from None


def load_morphism(ref, args, flag="--morphism", dga=None):
    name = _builtin(ref)
    if name is not None:
        if name in ("G", "PG"):
            dga = dga or nodal_presentation(default_order(args))
            G = morphism_G(dga)
            return G if name == "G" else core.compose_morphisms(pullback_morphism(dga), G)
        L = samples.exterior_algebra()
        if name == "identity":
            return core.identity_morphism(L)
        if name.startswith("gl2:"):
            try:
                a, b, c, d = (parse_scalar(x) for x in name[4:].split(","))
            except ValueError:
                raise InputError(f"{flag}: gl2 needs four rationals, e.g. builtin:gl2:1,1,0,1") from None
            return samples.gl2_morphism([[a, b], [c, d]])
        raise InputError(f"{flag}: unknown builtin morphism {name!r}; choose from {BUILTINS['morphisms']}")
    data = _read_json(ref, flag)
    if not isinstance(data, dict):
        raise InputError(f"{flag}: a morphism must be a JSON object")
    if "source" not in data or "target" not in data:
        raise InputError(f"{flag}: morphism JSON needs 'source' and 'target' fields")
    A = algebra_from_data(data["source"], f"{flag} field 'source'")
    B = A if data["target"] == data["source"] else algebra_from_data(data["target"], f"{flag} field 'target'")
    return core.table_morphism(A, B, _tables(data, "f", flag), name=data.get("name", ""))


def load_cochain(ref, algebra, flag="--cochain"):
    data = _read_json(ref, flag)
    if isinstance(data, dict) and "algebra" in data and algebra is None:
        algebra = algebra_from_data(data["algebra"], f"{flag} field 'algebra'")
    algebra = algebra or samples.exterior_algebra()
    return _wrap(flag, hochschild.HochschildCochain.from_json, algebra, data)


def _lambda_element(name, order):
    L = samples.exterior_algebra()
    p, q = Series2.p(order), Series2.q(order)
    if name == "alpha":
        return MCElement(L, {"a": p, "b": q}, order)
    s = Series2.monomial(1, 1, order)
    return MCElement(L, {"a": p * s.exp(), "b": q * (-s).exp()}, order)


def load_element(ref, context, args, flag="--element"):
    name = _builtin(ref)
    if name is not None:
        N = default_order(args)
        if name in ("alpha", "beta"):
            el = _lambda_element(name, N)
            if context is not None and context is not el.context and context is not el.algebra:
                raise InputError(f"{flag}: builtin:{name} lives in the exterior algebra")
            return el
        if name in ("G_beta", "PG_alpha"):
            dga = context if isinstance(context, PresentedDGA) else nodal_presentation(N)
            want = expected_G_beta(dga.order) if name == "G_beta" else expected_PG_alpha(dga.order)
            return MCElement(dga, dga.reduce(want), dga.order)
        raise InputError(f"{flag}: unknown builtin element {name!r}; choose from {BUILTINS['elements']}")
    data = _read_json(ref, flag)
    if context is None:
        if isinstance(data, dict) and "context" in data and _builtin(str(data["context"])) is None \
                and data["context"] not in ("", "Lambda", "nodal"):
            raise InputError(f"{flag}: unknown context {data['context']!r}")
        if isinstance(data, dict) and data.get("context") == "nodal":
            context = nodal_presentation(data.get("order") or default_order(args))
        else:
            context = samples.exterior_algebra()
    return _wrap(flag, MCElement.from_json, context, data)


def load_poly(args, dga):
    if args.word is not None:
        names = args.word.replace(",", " ").split()
        for g in names:
            if g not in dga.precedence:
                raise InputError(f"--word: unknown generator {g!r}")
        return NCPoly.word(*names)
    if args.poly is None:
        raise InputError("one of --word or --poly is required")
    poly = _wrap("--poly", NCPoly.from_json, _read_json(args.poly, "--poly"))
    for w in poly.words():
        for g in w:
            if g not in dga.precedence:
                raise InputError(f"--poly: field 'word' uses unknown generator {g!r}")
    return poly


# -- commands ----------------------------------------------------------------

def cmd_nodal_verify(args):
    N = default_order(args)
    dga = None
    if args.presentation is not None:
        dga = load_presentation(args.presentation, args)
    if args.drop_rule:
        dga = dga or nodal_presentation(N)
        for spec in args.drop_rule:
            lhs = tuple(spec.replace(",", " ").split())
            try:
                dga = dga.without_rule(lhs)
            except (KeyError, ValueError):
                raise InputError(f"--drop-rule: no rule with left side {spec!r}") from None
    rep = verify_pipeline(N, args.arity, dga=dga, gamma=args.gamma,
                          critical_length=args.critical_length)
    emit(args, rep.to_json(timing=args.timing), rep.text(timing=args.timing))
    return 0 if rep.passed else 1


def _map_report(args, command, F, extra=None):
    payload = {"command": command, "status": "PASS", "result": F.to_json()}
    payload.update(extra or {})
    emit(args, payload, str(F))
    return 0


def cmd_fps_compose(args):
    outer = load_map(args.outer, "--outer", args)
    inner = load_map(args.inner, "--inner", args)
    if outer.order != inner.order:
        raise InputError(f"--outer/--inner: field 'order' differs ({outer.order} vs {inner.order})")
    return _map_report(args, "fps compose", plane.compose(outer, inner))


def cmd_fps_invert(args):
    F = load_map(args.map, "--map", args)
    G = _wrap("--map", plane.invert, F)
    return _map_report(args, "fps invert", G)


def cmd_fps_flow(args):
    N = default_order(args)
    if (args.hamiltonian is None) == (args.radial is None):
        raise InputError("give exactly one of --hamiltonian or --radial")
    if args.radial is not None:
        try:
            coeffs = [parse_scalar(x) for x in args.radial.split(",")]
        except ValueError:
            raise InputError(f"--radial: expected comma-separated rationals, got {args.radial!r}") from None
        H = _wrap("--radial", plane.RadialHamiltonian, coeffs)
    else:
        H = _wrap("--hamiltonian", Series2.from_json, _read_json(args.hamiltonian, "--hamiltonian"))
    F = _wrap("--hamiltonian" if args.radial is None else "--radial", plane.ham_flow, H, N)
    return _map_report(args, "fps flow", F, {"hamiltonian": str(H)})


def cmd_fps_log(args):
    F = load_map(args.map, "--map", args)
    h = _wrap("--map", plane.radial_log, F)
    payload = {"command": "fps log", "status": "PASS",
               "result": {"radial_coefficients": [str(c) for c in h.coeffs], "text": str(h)}}
    emit(args, payload, str(h))
    return 0


def cmd_fps_conjugate(args):
    F = load_map(args.f, "--f", args)
    G = load_map(args.g, "--g", args)
    if F.order != G.order:
        raise InputError(f"--f/--g: field 'order' differs ({F.order} vs {G.order})")
    res = _wrap("--f/--g", plane.conjugacy_witness, F, G)
    payload = {"command": "fps conjugate", "status": _status(res.ok)}
    payload.update(res.to_json())
    if res.ok:
        lhs = plane.compose(res.witness, F)
        rhs = plane.compose(G, res.witness)
        zero = lhs == rhs
        payload["recomposition_residual_zero"] = zero
        payload["jacobian_det"] = plane.jacobian_det(res.witness).to_json()
        text = f"witness ({res.method}): {res.witness}\nrecomposition residual zero: {zero}"
    else:
        text = (f"no conjugator: obstruction in degree {res.obstruction_degree}\n"
                f"residual: {res.residual}")
    emit(args, payload, text)
    return 0 if res.ok else 1


def cmd_fps_jacobian(args):
    F = load_map(args.map, "--map", args)
    J = plane.jacobian_det(F)
    ok = True
    payload = {"command": "fps jacobian", "result": J.to_json()}
    text = f"det J = {J}"
    if args.expect is not None:
        try:
            c = parse_scalar(args.expect)
        except ValueError:
            raise InputError(f"--expect: expected a rational, got {args.expect!r}") from None
        diff = J - Series2.constant(c, J.order)
        ok = not diff
        payload["expected"] = args.expect
        payload["residual"] = diff.to_json()
        text += f"\nexpected {args.expect}: {_status(ok)}" + ("" if ok else f"  residual {diff}")
    payload["status"] = _status(ok)
    emit(args, payload, text)
    return 0 if ok else 1


def cmd_dga_check(args):
    dga = load_presentation(args.presentation, args)
    rep = check_consistency(dga, args.critical_length)
    fails = rep.failures()
    payload = {"command": "dga check", "status": _status(rep.passed),
               "critical_length": args.critical_length}
    payload.update(rep.to_json())
    lines = [f"dga check {dga.name or args.presentation}: {_status(rep.passed)}",
             f"  d^2 on {len(rep.d_squared)} generators, Leibniz on {len(rep.leibniz)} rules, "
             f"{len(rep.critical_pairs)} critical pairs up to length {args.critical_length}"]
    lines += [f"  {f}" for f in fails]
    emit(args, payload, "\n".join(lines))
    return 0 if rep.passed else 1


def cmd_dga_reduce(args):
    dga = load_presentation(args.presentation, args)
    poly = load_poly(args, dga)
    out = _wrap("--poly", dga.reduce, poly)
    payload = {"command": "dga reduce", "status": "PASS",
               "result": out.to_json(key=dga.word_key), "text": dga.format(out)}
    emit(args, payload, dga.format(out))
    return 0


def cmd_dga_diff(args):
    dga = load_presentation(args.presentation, args)
    poly = _wrap("--poly", dga.reduce, load_poly(args, dga))
    out = _wrap("--poly", dga.differentiate, poly)
    payload = {"command": "dga diff", "status": "PASS",
               "result": out.to_json(key=dga.word_key), "text": dga.format(out)}
    emit(args, payload, dga.format(out))
    return 0


def _check_payload(command, rep):
    payload = {"command": command, "status": _status(rep.passed)}
    payload.update(rep.to_json())
    return payload


def cmd_ainf_check_algebra(args):
    A = load_algebra(args.algebra)
    rep = core.check_ainf_relations(A, args.arity)
    emit(args, _check_payload("ainf check-algebra", rep), rep.summary())
    return 0 if rep.passed else 1


def cmd_ainf_check_morphism(args):
    f = load_morphism(args.morphism, args)
    rep = core.check_morphism(f, args.arity)
    emit(args, _check_payload("ainf check-morphism", rep), rep.summary())
    return 0 if rep.passed else 1


def _mu3_cocycle(HA):
    if 3 not in HA.arities():
        return True
    eta = hochschild.HochschildCochain(HA, tables={3: HA.tables[3]}, bar_degree=1)
    return hochschild.hochschild_differential(eta).is_zero(4)


def cmd_ainf_transfer(args):
    dga = load_finite_dga(args.dga)
    c = None
    if args.contraction is not None:
        data = _read_json(args.contraction, "--contraction")
        c = _wrap("--contraction", Contraction.from_json, data)
        if finite_dga_to_json(c.dga) != finite_dga_to_json(dga):
            raise InputError("--contraction: field 'dga' differs from --dga")
        c = Contraction(dga, c.space, c.iota, c.pi, c.h)
    res = _wrap("--contraction", transfer, dga, c, args.arity)
    rel = core.check_ainf_relations(res.algebra, args.arity)
    g_arity = min(args.arity, args.morphism_arity)
    grep = core.check_morphism(res.G, g_arity)
    cocycle = _mu3_cocycle(res.algebra)
    ok = rel.passed and grep.passed and cocycle
    payload = {
        "command": "ainf transfer",
        "status": _status(ok),
        "algebra": res.algebra.to_json(),
        "checks": {"relations": rel.to_json(), "G": grep.to_json(), "mu3_cocycle": cocycle},
        "parameters": {"arity": args.arity, "morphism_arity": g_arity},
    }
    lines = [f"transfer {dga.name}: H = {', '.join(res.algebra.space.names)}  {_status(ok)}",
             f"  relations: {rel.summary()}", f"  G: {grep.summary()}",
             f"  mu_3 Hochschild cocycle: {cocycle}"]
    for n in sorted(res.algebra.tables):
        for keys, out in sorted(res.algebra.tables[n].items()):
            lines.append(f"  mu_{n}({', '.join(keys)}) = {res.algebra.format(out)}")
    emit(args, payload, "\n".join(lines))
    return 0 if ok else 1


def cmd_ainf_exp(args):
    A = load_algebra(args.algebra) if args.algebra else None
    eta = load_cochain(args.cochain, A)
    f = _wrap("--cochain", hochschild.exp_coderivation, eta, args.arity)
    rep = core.check_morphism(f, args.arity)
    payload = _check_payload("ainf exp", rep)
    payload["morphism"] = f.to_json(args.arity)
    emit(args, payload, rep.summary())
    return 0 if rep.passed else 1


def _mc_context(ref, args):
    name = _builtin(ref)
    if name in ("nodal", "nodal-verbatim"):
        return load_presentation(ref, args, "--context")
    if name is not None:
        return builtin_algebra(name, "--context")
    data = _read_json(ref, "--context")
    if isinstance(data, dict) and "generators" in data:
        return load_presentation(ref, args, "--context")
    return algebra_from_data(data, "--context")


def cmd_mc_check(args):
    ctx = _mc_context(args.context, args) if args.context else None
    alpha = load_element(args.element, ctx, args)
    rep = check_mc(alpha)
    payload = {"command": "mc check", "element": alpha.format()}
    payload.update(rep.to_json())
    text = f"{alpha.format()}\nMC: {_status(rep.passed)}" + ("" if rep.passed else f"  residual {rep.text}")
    emit(args, payload, text)
    return 0 if rep.passed else 1


def cmd_mc_push(args):
    psi = load_morphism(args.morphism, args)
    ctx = psi.source.dga if isinstance(psi.source, core.DGAAlgebra) else psi.source
    alpha = load_element(args.element, ctx, args)
    r = check_mc(alpha)
    if not r.passed:
        payload = {"command": "mc push", "status": "FAIL", "residual": r.text,
                   "reason": "input element fails the MC equation"}
        emit(args, payload, f"input is not MC: residual {r.text}")
        return 1
    out = _wrap("--morphism", pushforward_mc, psi, alpha)
    payload = {"command": "mc push", "status": _status(out.certified), "result": out.to_json(),
               "text": out.format()}
    if not out.certified:
        payload["residual"] = check_mc(out).text
    emit(args, payload, f"{out.format()}\nMC: {_status(out.certified)}")
    return 0 if out.certified else 1


def cmd_mc_homdiff(args):
    dga = load_presentation(args.presentation, args)
    alpha = load_element(args.alpha, dga, args, "--alpha")
    beta = load_element(args.beta, dga, args, "--beta")
    name = _builtin(args.gamma)
    if name == "exp_rho":
        gamma = exp_rho(dga, dga.order)
    elif name == "one":
        gamma = NCPoly.unit(Series2.one(dga.order))
    elif name is not None:
        raise InputError(f"--gamma: unknown builtin {name!r}; choose from {BUILTINS['gammas']}")
    else:
        gamma = _wrap("--gamma", NCPoly.from_json, _read_json(args.gamma, "--gamma"))
        gamma = _wrap("--gamma", dga.reduce, gamma)
    w = _wrap("--gamma", h0_witness, alpha, beta, gamma)
    payload = {"command": "mc homdiff", "D_gamma": w.residual.to_json(dga.order, dga.word_key)}
    payload.update(w.to_json())
    text = f"D(gamma) = {w.text}\nH^0 witness: {_status(w.passed)}"
    emit(args, payload, text)
    return 0 if w.passed else 1


def cmd_mc_symmetrize(args):
    N = default_order(args)
    if (args.morphism is None) == (args.cochain is None):
        raise InputError("give exactly one of --morphism or --cochain")
    if args.cochain is not None:
        eta = load_cochain(args.cochain, None)
        phi = _wrap("--cochain", hochschild.exp_coderivation, eta)
    else:
        phi = load_morphism(args.morphism, args)
    F = _wrap("--morphism" if args.cochain is None else "--cochain", symmetrization, phi, N)
    return _map_report(args, "mc symmetrize", F)


# -- parser ------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--order", type=_positive, default=None,
                        help=f"truncation order (default {DEFAULT_ORDER} or ${ENV_ORDER})")
    arity = argparse.ArgumentParser(add_help=False)
    arity.add_argument("--arity", type=_positive, default=DEFAULT_ARITY, help="arity bound K")

    p = _Parser(prog="nodaltwist", description="Exact checks for the nodal sphere dga and friends.")
    p.add_argument("--list-builtins", action="store_true", help="print builtin:NAME choices")
    groups = p.add_subparsers(dest="group", parser_class=_Parser)

    def sub(group, name, fn, parents=(common,), **kw):
        s = group.add_parser(name, parents=list(parents), **kw)
        s.set_defaults(fn=fn)
        return s

    g = groups.add_parser("nodal", help="the nodal pipeline").add_subparsers(dest="cmd", parser_class=_Parser)
    s = sub(g, "verify", cmd_nodal_verify, (common, arity))
    s.add_argument("--presentation", default=None, help="alternative presentation (file or builtin)")
    s.add_argument("--drop-rule", action="append", default=[], metavar="LHS",
                   help="remove the rule with this left side, e.g. 'rho x' (repeatable)")
    s.add_argument("--gamma", choices=("exp", "one"), default="exp")
    s.add_argument("--critical-length", type=_positive, default=4)
    s.add_argument("--timing", action="store_true", help="include stage timings")

    g = groups.add_parser("fps", help="formal plane maps").add_subparsers(dest="cmd", parser_class=_Parser)
    s = sub(g, "compose", cmd_fps_compose)
    s.add_argument("--outer", required=True)
    s.add_argument("--inner", required=True)
    for name, fn in (("invert", cmd_fps_invert), ("log", cmd_fps_log), ("jacobian", cmd_fps_jacobian)):
        s = sub(g, name, fn)
        s.add_argument("--map", required=True)
        if name == "jacobian":
            s.add_argument("--expect", default=None, help="fail unless det J equals this constant")
    s = sub(g, "flow", cmd_fps_flow)
    s.add_argument("--hamiltonian", default=None, help="series JSON file")
    s.add_argument("--radial", default=None, help="coefficients of s^0, s^1, ... with s = pq")
    s = sub(g, "conjugate", cmd_fps_conjugate)
    s.add_argument("--f", required=True)
    s.add_argument("--g", required=True)

    g = groups.add_parser("dga", help="presented dgas").add_subparsers(dest="cmd", parser_class=_Parser)
    s = sub(g, "check", cmd_dga_check)
    s.add_argument("--presentation", default="builtin:nodal")
    s.add_argument("--critical-length", type=_positive, default=4)
    for name, fn in (("reduce", cmd_dga_reduce), ("diff", cmd_dga_diff)):
        s = sub(g, name, fn)
        s.add_argument("--presentation", default="builtin:nodal")
        s.add_argument("--word", default=None, help="generator names, e.g. 'x rho'")
        s.add_argument("--poly", default=None, help="NCPoly JSON file")

    g = groups.add_parser("ainf", help="A-infinity algebras").add_subparsers(dest="cmd", parser_class=_Parser)
    s = sub(g, "check-algebra", cmd_ainf_check_algebra, (common, arity))
    s.add_argument("--algebra", default="builtin:lambda")
    s = sub(g, "check-morphism", cmd_ainf_check_morphism, (common, arity))
    s.add_argument("--morphism", required=True)
    s = sub(g, "transfer", cmd_ainf_transfer, (common, arity))
    s.add_argument("--dga", required=True)
    s.add_argument("--contraction", default=None)
    s.add_argument("--morphism-arity", type=_positive, default=5,
                   help="arity bound for checking the transferred G (capped by --arity)")
    s = sub(g, "exp", cmd_ainf_exp, (common, arity))
    s.add_argument("--cochain", required=True)
    s.add_argument("--algebra", default=None)

    g = groups.add_parser("mc", help="Maurer-Cartan elements").add_subparsers(dest="cmd", parser_class=_Parser)
    s = sub(g, "check", cmd_mc_check)
    s.add_argument("--context", default=None)
    s.add_argument("--element", required=True)
    s = sub(g, "push", cmd_mc_push)
    s.add_argument("--morphism", required=True)
    s.add_argument("--element", required=True)
    s = sub(g, "homdiff", cmd_mc_homdiff)
    s.add_argument("--presentation", default="builtin:nodal")
    s.add_argument("--alpha", required=True)
    s.add_argument("--beta", required=True)
    s.add_argument("--gamma", required=True)
    s = sub(g, "symmetrize", cmd_mc_symmetrize)
    s.add_argument("--morphism", default=None)
    s.add_argument("--cochain", default=None)
    return p


def run(argv=None):
    """Run one command; returns the exit code (0 pass, 1 residual, 2 input error)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    if args.list_builtins:
        print(json.dumps(BUILTINS, sort_keys=True, indent=2))
        return 0
    if getattr(args, "fn", None) is None:
        parser.print_usage(sys.stderr)
        print("nodaltwist: error: a command is required", file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"nodaltwist: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, TypeError) as exc:
        print(f"nodaltwist: error: {_msg(exc)}", file=sys.stderr)
        return 2
    except RecursionError:
        print("nodaltwist: error: input too large", file=sys.stderr)
        return 2


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
