"""Command line front end: ``cohomoforge <command> [input.json] [flags]``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on input or
budget errors.  Reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import re
import sys
import time

import jsonschema
import numpy as np

from . import liering as lr
from .catalog import catalog as group_catalog
from .cohomology import (ShortExactSequence, check_complex, check_long_exact, cohomology_group, h1_der,
                         section_independence)
from .config import HARD_DEGREE_CAP, get_limits, limits_from_env, use_limits
from .errors import BudgetError, CohomoforgeError, SchemaError, UnknownCommand, ValidationError
from .gmodule import GModule, module_from_generators
from .groups import from_permutations, make_subgroup, validate_group
from .report import RunReport, render_text, write_summary
from .theorems import (frattini_triples, maschke_report, schur_check, verify_faithful_reduction, verify_frattini,
                       verify_inf_res, verify_nilpotent_vanishing)

INPUT_SCHEMA_ID = "cohomoforge/1"

_int = {"type": "integer"}
_matrix = {"type": "array", "items": {"type": "array", "items": _int}}
_group = {
    "type": "object",
    "oneOf": [
        {"required": ["table"]},
        {"required": ["perm_degree", "generators"]},
        {"required": ["catalog"]},
    ],
    "properties": {
        "name": {"type": "string"},
        "table": _matrix,
        "perm_degree": {"type": "integer", "minimum": 1},
        "generators": {"type": "array", "items": {"type": "array", "items": _int}},
        "catalog": {"type": "string"},
    },
}
_factors = {"type": "array", "items": {"type": "integer", "minimum": 2}}
_module_body = {
    "type": "object",
    "required": ["factors"],
    "properties": {
        "factors": _factors,
        "action": {"type": "array", "items": _matrix},
        "generator_action": {"type": "array",
                             "items": {"type": "array", "prefixItems": [_int, _matrix], "minItems": 2, "maxItems": 2}},
    },
}
_lie_body = {
    "type": "object",
    "required": ["p", "dim", "bracket"],
    "properties": {
        "p": {"type": "integer", "minimum": 2},
        "dim": {"type": "integer", "minimum": 0},
        "bracket": {"type": "array", "items": {"type": "array", "items": {"type": "array", "items": _int}}},
    },
}

INPUT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": INPUT_SCHEMA_ID,
    "type": "object",
    "required": ["schema", "kind"],
    "properties": {
        "schema": {"const": INPUT_SCHEMA_ID},
        "kind": {"enum": ["group", "abelian", "gmodule", "liering", "ses", "battery"]},
    },
    "allOf": [
        {"if": {"properties": {"kind": {"const": "group"}}},
         "then": {"allOf": [_group]}},
        {"if": {"properties": {"kind": {"const": "abelian"}}},
         "then": {"required": ["factors"], "properties": {"factors": _factors}}},
        {"if": {"properties": {"kind": {"const": "gmodule"}}},
         "then": {"required": ["group", "factors"],
                  "properties": {"group": _group, "factors": _factors,
                                 "action": {"type": "array", "items": _matrix},
                                 "generator_action": _module_body["properties"]["generator_action"],
                                 "subgroup": {"type": "array", "items": _int}}}},
        {"if": {"properties": {"kind": {"const": "liering"}}},
         "then": {"allOf": [_lie_body],
                  "properties": {"module": {"type": "array", "items": _matrix},
                                 "ideal": _matrix, "pmap": _matrix, "torus": _matrix}}},
        {"if": {"properties": {"kind": {"const": "ses"}}},
         "then": {"required": ["modules", "left", "middle", "right", "inj", "surj"],
                  "properties": {"group": _group, "liering": _lie_body,
                                 "modules": {"type": "object", "additionalProperties": {"type": "object"}},
                                 "left": {"type": "string"}, "middle": {"type": "string"},
                                 "right": {"type": "string"}, "inj": _matrix, "surj": _matrix}}},
        {"if": {"properties": {"kind": {"const": "battery"}}},
         "then": {"properties": {"catalog": {"enum": ["small", "extended"]}}}},
    ],
}

COMMANDS = ["cohomology", "h1", "inf-res", "les", "vanishing", "frattini", "maschke", "schur",
            "lie-cohomology", "lie-h1", "lie-inf-res", "lie-six-term", "lie-restricted", "lie-theorems", "suite"]


@dataclasses.dataclass
class InputDocument:
    kind: str
    raw: dict
    objects: dict
    path: str = None


# ---------------------------------------------------------------------------
# parsing


def _line_of(text, key):
    """First line (1-based) on which ``"key"`` appears as an object key."""
    if key is None:
        return None
    m = re.search(r'"' + re.escape(str(key)) + r'"\s*:', text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _field_error(text, message, path):
    keys = [p for p in path if isinstance(p, str)]
    field = "/".join(str(p) for p in path) or None
    return SchemaError(message, line=_line_of(text, keys[-1] if keys else None), field=field)


def _build_group(spec, text, where="group"):
    if "catalog" in spec:
        cat = group_catalog("extended")
        if spec["catalog"] not in cat:
            raise SchemaError(f"unknown catalog group {spec['catalog']!r}", line=_line_of(text, "catalog"),
                              field=f"{where}/catalog")
        return cat[spec["catalog"]]
    if "table" in spec:
        return validate_group(spec["table"], name=spec.get("name"))
    g, _ = from_permutations(spec["perm_degree"], spec["generators"], name=spec.get("name"))
    return g


def _build_module(group, spec, text, where):
    factors = spec["factors"]
    if "action" in spec:
        if len(spec["action"]) != group.order:
            raise SchemaError(f"{len(spec['action'])} action matrices for a group of order {group.order}",
                              line=_line_of(text, "action"), field=f"{where}/action")
        return GModule(group, factors, spec["action"], check=True)
    if "generator_action" in spec:
        return module_from_generators(group, factors, {int(g): m for g, m in spec["generator_action"]})
    return GModule(group, factors, [np.eye(len(factors), dtype=np.int64)] * group.order, check=True)


def _build_lie(spec):
    return lr.validate_lie(spec["p"], spec["dim"], spec["bracket"])


def _lie_module(ring, action):
    if action is None:
        return lr.trivial_lie_module(ring, 1)
    return lr.LieModule(ring, action)


def parse_text(text, path=None):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    if not isinstance(raw, dict):
        raise SchemaError("top level must be an object", line=1)
    validator = jsonschema.Draft202012Validator(INPUT_SCHEMA)
    errors = sorted(validator.iter_errors(raw), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        err = max(errors, key=lambda e: len(e.absolute_path))
        raise _field_error(text, err.message, list(err.absolute_path))
    kind = raw["kind"]
    objects = {}
    if kind == "group":
        objects["group"] = _build_group(raw, text, where="")
    elif kind == "abelian":
        from .abelian import FiniteAbelianGroup
        objects["abelian"] = FiniteAbelianGroup(raw["factors"])
    elif kind == "gmodule":
        g = _build_group(raw["group"], text)
        objects["group"] = g
        objects["module"] = _build_module(g, raw, text, "")
        if "subgroup" in raw:
            objects["subgroup"] = make_subgroup(g, raw["subgroup"])
    elif kind == "liering":
        ring = _build_lie(raw)
        objects["ring"] = ring
        objects["module"] = _lie_module(ring, raw.get("module"))
        for key in ("ideal", "pmap", "torus"):
            if key in raw:
                objects[key] = np.asarray(raw[key], dtype=np.int64).reshape(-1, ring.dim)
    elif kind == "ses":
        objects.update(_build_ses(raw, text))
    elif kind == "battery":
        objects["catalog"] = raw.get("catalog", "small")
    return InputDocument(kind, raw, objects, path)


def _build_ses(raw, text):
    names = [raw["left"], raw["middle"], raw["right"]]
    for role, name in zip(("left", "middle", "right"), names):
        if name not in raw["modules"]:
            raise SchemaError(f"module {name!r} is not defined", line=_line_of(text, role), field=role)
    if "liering" in raw:
        ring = _build_lie(raw["liering"])
        mods = [_lie_module(ring, raw["modules"][n].get("action")) for n in names]
        return {"ring": ring, "lie_ses": lr.LieShortExactSequence(*mods, raw["inj"], raw["surj"])}
    if "group" not in raw:
        raise SchemaError("a sequence needs a group or a liering", line=1, field="group")
    g = _build_group(raw["group"], text)
    mods = [_build_module(g, raw["modules"][n], text, f"modules/{n}") for n in names]
    return {"group": g, "ses": ShortExactSequence(*mods, raw["inj"], raw["surj"])}


def parse_input(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_text(text, path)


def canonical_json(obj, indent=0):
    """Sorted keys, one key per line; arrays of scalars inline, arrays of arrays one item per line."""
    pad = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {canonical_json(obj[k], indent + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(obj, list):
        if any(isinstance(v, (list, dict)) for v in obj):
            if all(isinstance(v, list) and not any(isinstance(w, (list, dict)) for w in v) for v in obj):
                return "[\n" + ",\n".join(pad + json.dumps(v, separators=(", ", ": ")) for v in obj) + \
                    "\n" + "  " * indent + "]"
            return "[\n" + ",\n".join(pad + canonical_json(v, indent + 1) for v in obj) + "\n" + "  " * indent + "]"
        return json.dumps(obj, separators=(", ", ": "))
    return json.dumps(obj)


def emit(doc):
    """Canonical text of a parsed document."""
    return canonical_json(doc.raw) + "\n"


# ---------------------------------------------------------------------------
# commands


def _need(doc, *keys, command):
    for k in keys:
        if k not in doc.objects:
            raise SchemaError(f"command {command!r} needs {k!r} in the input document", field=k)
    return [doc.objects[k] for k in keys]


def _factors(g):
    return [int(f) for f in g.factors]


def _describe(factors):
    return "0" if not factors else " x ".join(f"Z/{f}" for f in factors)


def _theorem_entry(report, id, rep, seconds):
    report.check(id, rep.conclusion_holds, {"hypotheses": [[n, h] for n, h, _ in rep.hypotheses], **rep.data},
                 {"hypotheses": [[n, h, w] for n, h, w in rep.hypotheses]}, seconds)


def _timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


def cmd_cohomology(doc, args, report):
    (module,) = _need(doc, "module", command="cohomology")
    degrees = [args.degree] if args.degree is not None else list(range(get_limits().degree_cap + 1))
    for n in degrees:
        h, dt = _timed(cohomology_group, module, n)
        report.add(f"H{n}", "pass", {"factors": _factors(h.group), "order": h.group.order,
                                     "text": f"H{n} = {_describe(_factors(h.group))}"}, seconds=dt)
        if n + 1 <= HARD_DEGREE_CAP:
            ok, dt = _timed(check_complex, module, n)
            report.check(f"d{n + 1}.d{n}=0", ok, {"degree": n}, {"degree": n}, dt)


def cmd_h1(doc, args, report):
    (module,) = _need(doc, "module", command="h1")
    (h, dt) = _timed(h1_der, module)
    factors = _factors(h.group)
    report.add("H1", "pass", {"factors": factors, "text": f"H1 = {_describe(factors)}"}, seconds=dt)
    other, dt = _timed(cohomology_group, module, 1)
    same = _factors(other.group) == factors
    report.check("h1_two_path", same, {"derivations": factors, "differential": _factors(other.group)},
                 {"derivations": factors, "differential": _factors(other.group)}, dt)


def cmd_inf_res(doc, args, report):
    module, sub = _need(doc, "module", "subgroup", command="inf-res")
    rep, dt = _timed(verify_inf_res, module, sub)
    _theorem_entry(report, "inflation_restriction", rep, dt)
    rep, dt = _timed(verify_faithful_reduction, module, sub)
    _theorem_entry(report, "faithful_reduction", rep, dt)


def cmd_les(doc, args, report):
    if "lie_ses" in doc.objects:
        return cmd_lie_six_term(doc, args, report)
    (seq,) = _need(doc, "ses", command="les")
    rep, dt = _timed(check_long_exact, seq, 1)
    for node in rep.nodes:
        report.check(f"exact at {node.label}", node.exact, {"ker_order": node.ker_order, "im_order": node.im_order},
                     node.witness, 0.0)
    (indep, data), dt2 = _timed(section_independence, seq, 5, args.seed)
    report.check("section_independence", indep, data, data, dt + dt2)


def cmd_vanishing(doc, args, report):
    if doc.kind == "battery":
        from .suite import run_criterion
        return _criterion_entries(report, [run_criterion(5, args.scale)])
    (module,) = _need(doc, "module", command="vanishing")
    rep, dt = _timed(verify_nilpotent_vanishing, module)
    _theorem_entry(report, "nilpotent_vanishing", rep, dt)


def cmd_frattini(doc, args, report):
    if doc.kind == "battery":
        from .suite import run_criterion
        return _criterion_entries(report, [run_criterion(11, args.scale, args.catalog)])
    (g,) = _need(doc, "group", command="frattini")
    triples, dt = _timed(frattini_triples, g)
    report.add("triples", "pass", {"count": len(triples)}, seconds=dt)
    for t in triples:
        rep, dt = _timed(verify_frattini, g, t.normal, t.carter)
        _theorem_entry(report, f"frattini H={list(t.normal.elements)} C={list(t.carter.elements)}", rep, dt)


def cmd_maschke(doc, args, report):
    (module,) = _need(doc, "module", command="maschke")
    rep, dt = _timed(maschke_report, module)
    _theorem_entry(report, "maschke", rep, dt)


def cmd_schur(doc, args, report):
    (module,) = _need(doc, "module", command="schur")
    rep, dt = _timed(schur_check, module)
    _theorem_entry(report, "schur", rep, dt)


def cmd_lie_cohomology(doc, args, report):
    (module,) = _need(doc, "module", command="lie-cohomology")
    degrees = [args.degree] if args.degree is not None else list(range(min(module.ring.dim, 2) + 1))
    for n in degrees:
        h, dt = _timed(lr.ce_cohomology, module, n)
        report.add(f"H{n}", "pass", {"dim": h.dim, "text": f"H{n} = F_{module.p}^{h.dim}"}, seconds=dt)
        ok, dt = _timed(lr.check_ce_complex, module, n)
        report.check(f"d{n + 1}.d{n}=0", ok, {"degree": n}, {"degree": n}, dt)


def cmd_lie_h1(doc, args, report):
    (module,) = _need(doc, "module", command="lie-h1")
    h, dt = _timed(lr.lie_h1_der, module)
    report.add("H1", "pass", {"dim": h.dim, "der_dim": h.der_dim, "ider_dim": h.ider_dim}, seconds=dt)
    if module.ring.dim:
        ce, dt = _timed(lr.ce_cohomology, module, 1)
        report.check("h1_two_path", ce.dim == h.dim, {"derivations": h.dim, "differential": ce.dim},
                     {"derivations": h.dim, "differential": ce.dim}, dt)


def cmd_lie_inf_res(doc, args, report):
    module, ideal = _need(doc, "module", "ideal", command="lie-inf-res")
    res, dt = _timed(lr.check_lie_inf_res, module, ideal)
    for node in res.report.nodes:
        report.check(f"exact at {node.label}", node.exact, {"ker": node.ker_order, "im": node.im_order},
                     node.witness, 0.0)
    report.add("dimensions", "pass", {"h1_quotient": res.h1_quotient, "h1": res.h1, "h1_ideal": res.h1_sub,
                                      "fixed": res.fixed}, seconds=dt)


def cmd_lie_six_term(doc, args, report):
    (seq,) = _need(doc, "lie_ses", command="lie-six-term")
    rep, dt = _timed(lr.check_six_term, seq)
    for node in rep.nodes:
        report.check(f"exact at {node.label}", node.exact, {"ker": node.ker_order, "im": node.im_order},
                     node.witness, 0.0)
    report.add("connecting_map", "pass", {"rank": rep.connecting_rank}, seconds=dt)


def cmd_lie_restricted(doc, args, report):
    ring, pmap = _need(doc, "ring", "pmap", command="lie-restricted")
    r, dt = _timed(lr.validate_restricted, ring, pmap)
    report.add("restricted_axioms", "pass", {"dim": ring.dim, "p": ring.p}, seconds=dt)
    for i in range(ring.dim):
        ss, cert = lr.is_semisimple_element(r, ring.unit(i))
        report.add(f"e{i} semisimple", "pass", {"semisimple": ss, **cert})
    if "torus" in doc.objects:
        report.add("torus", "pass", {"is_torus": lr.is_torus(r, doc.objects["torus"])})


def cmd_lie_theorems(doc, args, report):
    (module,) = _need(doc, "module", command="lie-theorems")
    restricted = None
    if "pmap" in doc.objects:
        restricted = lr.validate_restricted(module.ring, doc.objects["pmap"])
    reps, dt = _timed(lr.verify_lie_theorems, module, restricted, doc.objects.get("torus"))
    for name, rep in reps.items():
        _theorem_entry(report, name, rep, dt / max(len(reps), 1))


def _criterion_entries(report, results):
    for r in results:
        report.check(f"criterion {r.number:02d} {r.title}", r.passed and r.within_budget,
                     {"budget_seconds": r.budget, **r.data}, r.data, r.seconds)


def cmd_suite(doc, args, report):
    from .suite import run_suite
    _criterion_entries(report, run_suite(args.scale, only=args.only, catalog=args.catalog))


HANDLERS = {
    "cohomology": cmd_cohomology, "h1": cmd_h1, "inf-res": cmd_inf_res, "les": cmd_les,
    "vanishing": cmd_vanishing, "frattini": cmd_frattini, "maschke": cmd_maschke, "schur": cmd_schur,
    "lie-cohomology": cmd_lie_cohomology, "lie-h1": cmd_lie_h1, "lie-inf-res": cmd_lie_inf_res,
    "lie-six-term": cmd_lie_six_term, "lie-restricted": cmd_lie_restricted, "lie-theorems": cmd_lie_theorems,
    "suite": cmd_suite,
}


def run_command(doc, command, args):
    """Dispatch ``command`` on a parsed document; returns a RunReport."""
    if command not in HANDLERS:
        raise UnknownCommand(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")
    flags = {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "input") and v is not None}
    report = RunReport(command, doc.path if doc else None, flags)
    t0 = time.perf_counter()
    HANDLERS[command](doc, args, report)
    report.seconds = time.perf_counter() - t0
    return report


# ---------------------------------------------------------------------------
# entry point


def build_parser():
    ap = argparse.ArgumentParser(prog="cohomoforge", description="Exact low-degree cohomology of finite groups "
                                 "and Lie rings over prime fields, with theorem checks.")
    ap.add_argument("command", help="one of: " + ", ".join(COMMANDS))
    ap.add_argument("input", nargs="?", help="input JSON document (optional for suite)")
    ap.add_argument("--degree", type=int, help="cohomological degree")
    ap.add_argument("--order-cap", type=int, help="closure size cap for permutation groups")
    ap.add_argument("--degree-cap", type=int, help="largest cohomological degree allowed (hard limit 3)")
    ap.add_argument("--size-budget", type=int, help="entry budget of a differential matrix")
    ap.add_argument("--catalog", choices=["small", "extended"], default=None, help="group catalog for batteries")
    ap.add_argument("--scale", choices=["quick", "full"], default="full", help="battery size")
    ap.add_argument("--only", type=int, nargs="+", help="suite: run only these criteria")
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized sections")
    ap.add_argument("--json", action="store_true", help="machine-readable report on stdout")
    ap.add_argument("--plot-dir", help="write summary.tsv and summary.png into this directory")
    return ap


def _limits(args, environ=None):
    lim = limits_from_env(environ=environ)
    changes = {}
    for flag, field in (("order_cap", "order_cap"), ("degree_cap", "degree_cap"), ("size_budget", "size_budget")):
        val = getattr(args, flag)
        if val is not None:
            changes[field] = val
    return dataclasses.replace(lim, **changes)


def main(argv=None, environ=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command not in HANDLERS:
            raise UnknownCommand(f"unknown command {args.command!r}; expected one of {', '.join(COMMANDS)}")
        with use_limits(_limits(args, environ)):
            doc = parse_input(args.input) if args.input else None
            if doc is None and args.command != "suite":
                raise SchemaError(f"command {args.command!r} needs an input document")
            if doc is not None and doc.kind == "battery" and args.catalog is None:
                args.catalog = doc.objects["catalog"]
            report = run_command(doc, args.command, args)
    except (CohomoforgeError, OSError, ValueError) as exc:
        kind = type(exc).__name__
        witness = getattr(exc, "witness", None)
        print(f"error: {kind}: {exc}" + (f" {witness}" if witness else ""), file=sys.stderr)
        return 2
    sys.stdout.write(report.to_json() if args.json else render_text(report))
    if args.plot_dir:
        write_summary(report, args.plot_dir)
    return 0 if report.overall == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
