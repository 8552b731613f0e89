"""Command-line front end: checkers, homotopy colimit builds and homology.

Every command prints a deterministic report (text by default, ``--json`` for
machine output) and exits 0 on pass, 1 on failure and 2 on usage or input
errors.  Each finding carries a replay token; pass it back with ``--replay``
to re-run just that law with the same inputs.
"""
from __future__ import annotations

import json
import os
import random
import sys
import time
from typing import Any, Callable

import click

from .algebras import (
    ChainGroupAlgebra,
    algebra_from_json,
    chain_cone,
    check_algebra,
    check_bar,
    check_diagram,
    check_lax,
    diagram_from_json,
    finite_sets_algebra,
    free_algebra,
    random_chain_cone,
)
from .braid import BraidWord, braid_equal, braid_equal_bfs, braid_equal_garside
from .cat_core import CatDiagram, grothendieck, point
from .hocolim import (
    Hocolim,
    HocolimError,
    InducedR,
    check_universal,
    grothendieck_case,
    morphism_to_json,
    perturbations,
    raw_from_json,
    strictify,
)
from .operads import OperadError, check_factorization, check_operad_axioms, component_category, parse_operad
from .reports import Report
from .samples import seeded_diagrams
from .simplicial import SSetDiagram, homology, nerve, ss_hocolim, weak_equivalence_check

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


class InputError(click.ClickException):
    exit_code = 2


def resolve(path: str) -> str:
    """A path as given, else relative to the package (so ``fixtures/x.json`` works anywhere)."""
    for cand in (path, os.path.join(os.path.dirname(__file__), path), os.path.join(FIXTURES, os.path.basename(path))):
        if os.path.exists(cand):
            return cand
    raise InputError(f"no such file: {path}")


def load_json(path: str) -> tuple[dict, str]:
    p = resolve(path)
    with open(p) as fh:
        text = fh.read()
    try:
        return json.loads(text), os.path.dirname(os.path.abspath(p))
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from None


def operad_of(selector: str | None, base_dir: str | None = None):
    if not selector:
        raise InputError("--operad is required")
    try:
        return parse_operad(selector, base_dir or FIXTURES)
    except (OperadError, OSError) as e:
        raise InputError(str(e)) from None


def positive(name: str, value: int | None) -> None:
    if value is not None and value < 1:
        raise InputError(f"{name} must be positive, got {value}")


# ---------------------------------------------------------------------------
# output


class Outcome:
    """Command echo, status, findings and replay tokens."""

    def __init__(self, command: str, args: dict, seed: int):
        self.command, self.args, self.seed = command, args, seed
        self.sections: list[dict] = []
        self.status = "pass"
        self.started = time.perf_counter()

    def add_report(self, rep: Report) -> None:
        findings = []
        for f in rep.findings:
            token = json.dumps({"command": self.command, "args": self.args, "law": f.law}, sort_keys=True,
                               separators=(",", ":"), ensure_ascii=False)
            findings.append({"law": f.law, "witness": f.witness, "replay": token})
        self.sections.append({"name": rep.name, "checked": dict(sorted(rep.checked.items())), "findings": findings,
                              "notes": list(rep.notes)})
        if findings:
            self.status = "fail"

    def add_facts(self, name: str, facts: dict, ok: bool = True) -> None:
        self.sections.append({"name": name, "facts": facts})
        if not ok:
            self.status = "fail"

    def restrict(self, law: str) -> None:
        self.status = "pass"
        for s in self.sections:
            if "findings" in s:
                s["findings"] = [f for f in s["findings"] if f["law"] == law]
                s["checked"] = {k: v for k, v in s["checked"].items() if k == law}
                if s["findings"]:
                    self.status = "fail"
            elif "facts" in s and s["facts"].get("ok") is False:
                self.status = "fail"

    def emit(self, as_json: bool, timing: bool) -> None:
        doc: dict[str, Any] = {"command": self.command, "args": self.args, "seed": self.seed, "status": self.status,
                               "sections": self.sections}
        if timing:
            doc["seconds"] = round(time.perf_counter() - self.started, 3)
        if as_json:
            click.echo(json.dumps(doc, indent=1, sort_keys=True, ensure_ascii=False))
            return
        click.echo(f"{self.command}: {self.status.upper()}")
        for s in self.sections:
            click.echo(f"- {s['name']}")
            for k, v in s.get("facts", {}).items():
                click.echo(f"    {k}: {json.dumps(v, ensure_ascii=False) if not isinstance(v, str) else v}")
            for law, n in s.get("checked", {}).items():
                click.echo(f"    {law}: {n} checked")
            for note in s.get("notes", []):
                click.echo(f"    note: {note}")
            for f in s.get("findings", []):
                click.echo(f"    FAIL {f['law']}: {f['witness']}")
                click.echo(f"      replay: {f['replay']}")
        if timing:
            click.echo(f"time: {doc['seconds']} s")

    def exit(self) -> None:
        sys.exit(0 if self.status == "pass" else 1)


def common(fn: Callable) -> Callable:
    fn = click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")(fn)
    fn = click.option("--seed", default=0, show_default=True, type=int)(fn)
    fn = click.option("--replay", default=None, help="Replay token from an earlier failure.")(fn)
    fn = click.option("--timing", is_flag=True, help="Report wall-clock time (breaks byte-identical output).")(fn)
    return fn


def run_command(name: str, args: dict, seed: int, replay: str | None, as_json: bool, timing: bool,
                body: Callable[[Outcome, dict], None]) -> None:
    law = None
    if replay:
        try:
            token = json.loads(replay if not os.path.exists(replay) else open(replay).read())
        except json.JSONDecodeError as e:
            raise InputError(f"replay token: line {e.lineno}, column {e.colno}: {e.msg}") from None
        if token.get("command") != name:
            raise InputError(f"replay token is for {token.get('command')!r}, not {name!r}")
        args, law = token["args"], token["law"]
        seed = args.get("seed", seed)
    out = Outcome(name, args, seed)
    try:
        body(out, args)
    except (OperadError, ValueError, KeyError) as e:
        if isinstance(e, click.ClickException):
            raise
        raise InputError(f"{type(e).__name__}: {e}") from None
    if law is not None:
        out.restrict(law)
    out.emit(as_json, timing)
    out.exit()


@click.group()
def main() -> None:
    """Homotopy colimits of algebras over Cat-operads: checks and builds."""


# ---------------------------------------------------------------------------
# operads


@main.command("check-operad")
@click.option("--operad", "operad", required=False)
@click.option("--max-arity", default=3, show_default=True, type=int)
@click.option("--sample", default=200, show_default=True, type=int)
@common
def check_operad_cmd(operad, max_arity, sample, seed, replay, as_json, timing):
    """Unit, associativity, equivariance and Σ-freeness."""
    positive("--max-arity", max_arity)
    args = {"operad": operad, "max_arity": max_arity, "sample": sample, "seed": seed}

    def body(out, a):
        op = operad_of(a["operad"])
        out.add_report(check_operad_axioms(op, m_max=a["max_arity"], sample=a["sample"], seed=a["seed"]))

    run_command("check-operad", args, seed, replay, as_json, timing, body)


@main.command("check-factorization")
@click.option("--operad", "operad", required=False)
@click.option("--max-arity", default=4, show_default=True, type=int)
@click.option("--sample", default=None, type=int)
@common
def check_factorization_cmd(operad, max_arity, sample, seed, replay, as_json, timing):
    """Initial objects in every component of every factorization category."""
    positive("--max-arity", max_arity)
    args = {"operad": operad, "max_arity": max_arity, "sample": sample, "seed": seed}

    def body(out, a):
        op = operad_of(a["operad"])
        out.add_report(check_factorization(op, m_max=a["max_arity"], sample=a["sample"], seed=a["seed"]))

    run_command("check-factorization", args, seed, replay, as_json, timing, body)


# ---------------------------------------------------------------------------
# algebras and diagrams


@main.command("check-algebra")
@click.argument("path", required=False)
@click.option("--operad", "operad", default=None, help="Free algebra on a point over this operad (no PATH).")
@click.option("--cap", default=2, show_default=True, type=int)
@click.option("--max-arity", default=3, show_default=True, type=int)
@click.option("--sample", default=40, show_default=True, type=int)
@common
def check_algebra_cmd(path, operad, cap, max_arity, sample, seed, replay, as_json, timing):
    """Algebra laws for an algebra file, or for a free algebra on a point."""
    positive("--cap", cap)
    args = {"path": path, "operad": operad, "cap": cap, "max_arity": max_arity, "sample": sample, "seed": seed}

    def body(out, a):
        if a["path"]:
            doc, base = load_json(a["path"])
            if a["operad"]:
                doc["operad"] = a["operad"]
            alg = algebra_from_json(doc, base)
        else:
            alg = free_algebra(point(), operad_of(a["operad"]), a["cap"])
        out.add_report(check_algebra(alg, max_arity=a["max_arity"], sample=a["sample"], seed=a["seed"]))

    run_command("check-algebra", args, seed, replay, as_json, timing, body)


def _diagram(path: str):
    doc, base = load_json(path)
    if "diagram" in doc:
        doc = doc["diagram"]
    return diagram_from_json(doc, base), doc


@main.command("check-lax")
@click.option("--diagram", "diagram", required=True)
@click.option("--arrow", "arrow", default=None, help="Index morphism (default: every non-identity one).")
@click.option("--max-arity", default=3, show_default=True, type=int)
@click.option("--sample", default=30, show_default=True, type=int)
@common
def check_lax_cmd(diagram, arrow, max_arity, sample, seed, replay, as_json, timing):
    """Coherence laws of the lax morphisms of a diagram."""
    args = {"diagram": diagram, "arrow": arrow, "max_arity": max_arity, "sample": sample, "seed": seed}

    def body(out, a):
        X, _ = _diagram(a["diagram"])
        L = X.index
        arrows = [a["arrow"]] if a["arrow"] else [u for u in L.src if not L.is_identity(u)]
        for u in arrows:
            if u not in L.src:
                raise InputError(f"no index morphism {u!r}")
            out.add_report(check_lax(X.on(u), max_arity=a["max_arity"], sample=a["sample"], seed=a["seed"]))

    run_command("check-lax", args, seed, replay, as_json, timing, body)


@main.command("check-diagram")
@click.option("--diagram", "diagram", required=True)
@click.option("--max-arity", default=3, show_default=True, type=int)
@common
def check_diagram_cmd(diagram, max_arity, seed, replay, as_json, timing):
    """Algebras, lax morphisms and strict functoriality of a diagram."""
    args = {"diagram": diagram, "max_arity": max_arity, "seed": seed}

    def body(out, a):
        X, _ = _diagram(a["diagram"])
        out.add_report(check_diagram(X, max_arity=a["max_arity"], seed=a["seed"]))

    run_command("check-diagram", args, seed, replay, as_json, timing, body)


# ---------------------------------------------------------------------------
# homotopy colimits


@main.command("hocolim-build")
@click.option("--diagram", "diagram", required=True)
@click.option("--max-arity", default=2, show_default=True, type=int)
@click.option("--sample", default=20, show_default=True, type=int)
@common
def hocolim_build_cmd(diagram, max_arity, sample, seed, replay, as_json, timing):
    """Enumerate objects to an arity bound, sample morphisms and check the algebra laws.

    A file with ``morphism1``/``morphism2``/``composite`` entries is also replayed:
    the composite of the two morphisms must equal the stored composite.
    """
    positive("--max-arity", max_arity)
    args = {"diagram": diagram, "max_arity": max_arity, "sample": sample, "seed": seed}

    def body(out, a):
        doc, base = load_json(a["diagram"])
        X = diagram_from_json(doc.get("diagram", doc), base)
        H = Hocolim(X, enum_arity=a["max_arity"])
        rng = random.Random(a["seed"])
        objs = H.objects(a["max_arity"])
        counts = {}
        for y in objs:
            counts[str(y.arity)] = counts.get(str(y.arity), 0) + 1
        ms = [H.random_morphism(rng, rng.choice(objs)) for _ in range(a["sample"])] if objs else []
        out.add_facts("enumeration", {"objects by arity": counts, "sampled morphisms": len(ms),
                                      "first sample": morphism_to_json(H, ms[0]) if ms else None})
        rep = Report("category laws")
        for m in ms:
            nxt = H.random_morphism(rng, m.target)
            last = H.random_morphism(rng, nxt.target)
            rep.expect(H.equal(H.compose(last, H.compose(nxt, m)), H.compose(H.compose(last, nxt), m)),
                       "associativity", str(m))
            rep.expect(H.equal(H.compose(H.identity(m.target), m), m) and H.equal(H.compose(m, H.identity(m.source)), m),
                       "unit", str(m))
            rep.expect(H.equal(H.recompose(H.decompose(m), m.source), m), "atom decomposition", str(m))
        out.add_report(rep)
        out.add_report(check_algebra(H.algebra, max_arity=a["max_arity"], sample=a["sample"], seed=a["seed"]))
        if "morphism1" in doc:
            m1 = H.normalize(raw_from_json(H, doc["morphism1"]))
            m2 = H.normalize(raw_from_json(H, doc["morphism2"]))
            ok = H.equal(H.compose(m2, m1), H.normalize(raw_from_json(H, doc["composite"])))
            out.add_facts("composition replay", {"ok": ok, "composite": morphism_to_json(H, H.compose(m2, m1))}, ok)

    run_command("hocolim-build", args, seed, replay, as_json, timing, body)


def _cone(X, doc: dict, seed: int):
    S = None
    if "cone" in doc:
        c = doc["cone"]
        t = dict(c["target"])
        t.setdefault("operad", doc["operad"])
        S = algebra_from_json(t)
        if not isinstance(S, ChainGroupAlgebra):
            raise InputError("cone targets must be chain-group algebras")
        return chain_cone(X, S, {o: (tuple(v["h"]), int(v["t"])) for o, v in c["legs"].items()})
    first = X.at(X.index.objects[0])
    S = ChainGroupAlgebra(X.operad, 3, getattr(first, "order", 3), name="S")
    k = random_chain_cone(random.Random(seed), X, S)
    if k is None:
        raise InputError("no cone found for this diagram; add a 'cone' entry")
    return k


@main.command("universal-check")
@click.option("--diagram", "diagram", required=True)
@click.option("--max-arity", default=2, show_default=True, type=int)
@click.option("--sample", default=10, show_default=True, type=int, help="Number of perturbations.")
@common
def universal_check_cmd(diagram, max_arity, sample, seed, replay, as_json, timing):
    """Cone → induced r → defining equations, and perturbed copies of r must fail them."""
    args = {"diagram": diagram, "max_arity": max_arity, "sample": sample, "seed": seed}

    def body(out, a):
        doc, base = load_json(a["diagram"])
        X = diagram_from_json(doc, base)
        k = _cone(X, doc, a["seed"])
        H = Hocolim(X)
        r = InducedR(H, k)
        out.add_report(check_universal(H, k, r, max_arity=a["max_arity"], seed=a["seed"]))
        caught = []
        for i, p in enumerate(perturbations(H, k, a["sample"], seed=a["seed"])):
            rep = check_universal(H, k, p, max_arity=a["max_arity"], seed=a["seed"])
            caught.append({"changed": sorted(p.overrides), "violated": sorted(rep.failed_laws())})
        ok = all(c["violated"] for c in caught)
        out.add_facts("perturbations", {"ok": ok, "count": len(caught), "caught": sum(bool(c["violated"]) for c in caught),
                                        "details": caught}, ok)

    run_command("universal-check", args, seed, replay, as_json, timing, body)


@main.command("strictify-check")
@click.option("--operad", "operad", default="Mk:2", show_default=True)
@click.option("--cap", default=2, show_default=True, type=int)
@click.option("--sample", default=30, show_default=True, type=int)
@click.argument("path", required=False)
@common
def strictify_check_cmd(operad, cap, sample, path, seed, replay, as_json, timing):
    """r∘j = id, naturality of s, and r∘k = id on the free algebra of a point."""
    positive("--cap", cap)
    args = {"operad": operad, "cap": cap, "sample": sample, "path": path, "seed": seed}

    def body(out, a):
        op = operad_of(a["operad"])
        if a["path"]:
            d, base = load_json(a["path"])
            d["operad"] = a["operad"]
            alg = algebra_from_json(d, base)
        else:
            alg = ChainGroupAlgebra(op, 3, 3, name="A")
        st = strictify(alg)
        rng = random.Random(a["seed"])
        bad = st.check_rj(seed=a["seed"])
        out.add_facts("r∘j = id", {"ok": not bad, "witnesses": bad}, not bad)
        objs = st.H.objects(2)
        ms = [st.H.random_morphism(rng, rng.choice(objs)) for _ in range(a["sample"])]
        out.add_report(st.check_s(ms))
        F = free_algebra(point(), op, a["cap"])
        sf = strictify(F)
        rep = Report("r∘k = id on a free algebra")
        for z in F.objects():
            rep.expect(F.carrier.ob_eq(sf.r.ob(sf.k_ob(z)), z), "r∘k = id (objects)", str(z))
            for _ in range(3):
                m = F.random_morphism(rng, z)
                rep.expect(F.carrier.mor_eq(sf.r.mor(sf.k_mor(m)), m), "r∘k = id (morphisms)", str(m))
        out.add_report(rep)

    run_command("strictify-check", args, seed, replay, as_json, timing, body)


@main.command("grothendieck-compare")
@click.option("--diagram", "diagram", default=None, help="Cat diagram JSON (default: seeded random diagrams).")
@click.option("--sample", default=25, show_default=True, type=int)
@common
def grothendieck_compare_cmd(diagram, sample, seed, replay, as_json, timing):
    """Initial-operad hocolim vs Grothendieck construction vs Cat coend."""
    args = {"diagram": diagram, "sample": sample, "seed": seed}

    def body(out, a):
        if a["diagram"]:
            doc, _ = load_json(a["diagram"])
            diagrams = [CatDiagram.from_json(doc)]
        else:
            diagrams = seeded_diagrams(a["seed"], a["sample"])
        results = []
        for i, X in enumerate(diagrams):
            try:
                g = grothendieck_case(X)
            except HocolimError as exc:
                results.append({"diagram": i, "grothendieck": False, "coend": False, "error": str(exc)})
                continue
            results.append({"objects": len(g.category.objects), "morphisms": len(g.category.src),
                            "grothendieck": True, "coend": g.coend_witness is not None})
        ok = all(r["grothendieck"] and r["coend"] for r in results)
        out.add_facts("isomorphisms", {"ok": ok, "isomorphic": ok, "diagrams": results}, ok)

    run_command("grothendieck-compare", args, seed, replay, as_json, timing, body)


# ---------------------------------------------------------------------------
# homology


@main.command("nerve-homology")
@click.option("--operad", "operad", default=None)
@click.option("--arity", default=2, show_default=True, type=int)
@click.option("--dim", default=3, show_default=True, type=int)
@click.option("--diagram", "diagram", default=None, help="Cat diagram JSON: homology of its Grothendieck construction.")
@common
def nerve_homology_cmd(operad, arity, dim, diagram, seed, replay, as_json, timing):
    """Integer homology of the nerve of M(arity), truncated at --dim."""
    positive("--dim", dim)
    args = {"operad": operad, "arity": arity, "dim": dim, "diagram": diagram, "seed": seed}

    def body(out, a):
        if a["diagram"]:
            doc, _ = load_json(a["diagram"])
            X = CatDiagram.from_json(doc)
            c = grothendieck(X.index, X)
        else:
            c = component_category(operad_of(a["operad"]), a["arity"])
        h = homology(nerve(c, a["dim"]))
        out.add_facts("homology", {"objects": len(c.objects), "morphisms": len(c.src), **h.to_json()})

    run_command("nerve-homology", args, seed, replay, as_json, timing, body)


@main.command("eta-compare")
@click.option("--diagram", "diagram", default=None)
@click.option("--sample", default=10, show_default=True, type=int)
@click.option("--dim", default=3, show_default=True, type=int)
@common
def eta_compare_cmd(diagram, sample, dim, seed, replay, as_json, timing):
    """Homology of the Bousfield–Kan hocolim of nerves vs the nerve of the Grothendieck construction."""
    args = {"diagram": diagram, "sample": sample, "dim": dim, "seed": seed}

    def body(out, a):
        if a["diagram"]:
            doc, _ = load_json(a["diagram"])
            diagrams = [CatDiagram.from_json(doc)]
        else:
            diagrams = seeded_diagrams(a["seed"], a["sample"], max_size=3)
        rows = []
        for X in diagrams:
            res = weak_equivalence_check(ss_hocolim(X.index, SSetDiagram.nerve_of(X, a["dim"])),
                                         nerve(grothendieck(X.index, X), a["dim"]))
            rows.append({"agree": res["agree"], "label": res["label"], "groups": res["left"]["groups"]})
        ok = all(r["agree"] for r in rows)
        out.add_facts("η-comparison", {"ok": ok, "diagrams": rows}, ok)

    run_command("eta-compare", args, seed, replay, as_json, timing, body)


# ---------------------------------------------------------------------------
# bar construction and braids


@main.command("bar-check")
@click.option("--operad", "operad", default="SigmaTilde", show_default=True)
@click.option("--cap", default=2, show_default=True, type=int)
@click.option("--dim", default=2, show_default=True, type=int, help="Top degree.")
@click.option("--sample", default=30, show_default=True, type=int)
@click.argument("path", required=False)
@common
def bar_check_cmd(operad, cap, dim, sample, path, seed, replay, as_json, timing):
    """Simplicial identities of the augmented bar construction."""
    positive("--cap", cap)
    args = {"operad": operad, "cap": cap, "dim": dim, "sample": sample, "path": path, "seed": seed}

    def body(out, a):
        op = operad_of(a["operad"])
        if a["path"]:
            d, base = load_json(a["path"])
            alg = algebra_from_json(d, base)
        else:
            alg = finite_sets_algebra(op, a["cap"])
        out.add_report(check_bar(alg, top=a["dim"], cap=a["cap"], samples=a["sample"], seed=a["seed"]))

    run_command("bar-check", args, seed, replay, as_json, timing, body)


def _braid_cases(path: str | None, words: tuple, strands: int | None) -> list[tuple[int, str, str, str | None]]:
    if words:
        if len(words) != 2 or strands is None:
            raise InputError("give two words and --strands")
        return [(strands, words[0], words[1], None)]
    cases = []
    with open(resolve(path or "fixtures/braid-fixtures.txt")) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split("|")]
            if len(parts) not in (3, 4) or not parts[0].isdigit():
                raise InputError(f"braid fixtures line {lineno}, column 1: expected 'n | u | v [| expected]'")
            cases.append((int(parts[0]), parts[1], parts[2], parts[3] if len(parts) == 4 else None))
    return cases


@main.command("braid-eq")
@click.argument("words", nargs=-1)
@click.option("--strands", default=None, type=int)
@click.option("--file", "path", default=None, help="Fixture file (default: the shipped braid fixtures).")
@common
def braid_eq_cmd(words, strands, path, seed, replay, as_json, timing):
    """Braid word equality by Garside normal form, cross-checked by the BFS oracle for positive words."""
    args = {"words": list(words), "strands": strands, "path": path, "seed": seed}

    def body(out, a):
        rep = Report("braid equality")
        rows = []
        for n, u, v, expected in _braid_cases(a["path"], tuple(a["words"]), a["strands"]):
            U, V = BraidWord.parse(n, u), BraidWord.parse(n, v)
            eq = braid_equal(U, V)
            row = {"strands": n, "u": u, "v": v, "equal": eq}
            if U.positive and V.positive:
                row["bfs"] = braid_equal_bfs(U, V)
                rep.expect(row["bfs"] == braid_equal_garside(U, V), "oracles agree", f"{u} vs {v}")
            if expected is not None:
                rep.expect(eq == (expected == "equal"), "expected result", f"{n} | {u} | {v} | {expected}")
            rows.append(row)
        out.add_facts("cases", {"results": rows})
        out.add_report(rep)

    run_command("braid-eq", args, seed, replay, as_json, timing, body)


if __name__ == "__main__":  # pragma: no cover
    main()
