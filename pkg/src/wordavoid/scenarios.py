"""Scenario runners exercising the packaged constructions end to end.

Each scenario reruns one construction's verification story at desk scale and
reports named pass/fail checks plus JSON-able artifacts.  Reference prefixes
and witness inventories are pinned in the packaged data, so a corrupted
registry entry surfaces as a failed check rather than a crash.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .counting import (build_automaton, count_avoiding, growth_rate,
                       lower_bound_family, minimal_forbidden)
from .instances import InstanceRegistry, load_registry
from .morphisms import fixed_point_prefix, power
from .verify import (find_inclusions, find_interchanges, refute_inclusion,
                     verify_square_transfer, verify_substitution_transfer)
from .words import (AvoidanceSpec, GapPattern, contains_factor,
                    contains_gap_pattern, max_square_root, perfect_shuffle,
                    satisfies_spec, word_from_text, word_to_text)

G_TABLE = (1, 2, 4, 6, 10, 16, 24, 36, 52, 72, 90, 116, 142, 178, 220, 264,
           332, 414)
H_TABLE = (1, 2, 4, 8, 13, 22, 31, 46, 58, 78, 99, 124, 144, 176, 198, 234,
           262, 300, 351)
MINIMAL_SET_SIZES = {"dekking": 90, "fs": 65}

# Digests of the sorted enumerated family words, frozen from the verified
# construction so any image corruption shows up as a family mismatch.
FAMILY_DIGESTS = {
    "dekking": "eeef81c3ff5a16cb024fe161bd6aed8f474e1ed33c254cffd49522163aefd2dc",
    "fs": "a11398d1ea5d9a35f06a49f463c78578c86105a1d8f580f97f5f09627e7b6868",
}


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class ScenarioReport:
    name: str
    inputs: tuple[str, ...]
    checks: tuple[Check, ...]
    artifacts: dict

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok,
                "inputs": list(self.inputs),
                "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail}
                           for c in self.checks],
                "artifacts": self.artifacts}

    def digest(self) -> str:
        lines = [f"scenario {self.name}: {'PASS' if self.ok else 'FAIL'}"]
        for c in self.checks:
            mark = "ok " if c.ok else "FAIL"
            lines.append(f"  [{mark}] {c.name}" + (f": {c.detail}" if c.detail
                                                   else ""))
        return "\n".join(lines)


class _Collector:
    """Runs check bodies, catching exceptions as failures."""

    def __init__(self):
        self.checks: list[Check] = []
        self.artifacts: dict = {}

    def run(self, name: str, body) -> None:
        try:
            result = body()
        except Exception as exc:
            self.checks.append(Check(name, False, f"raised {exc!r}"))
            return
        if isinstance(result, tuple):
            ok, detail = result
        else:
            ok, detail = result, ""
        self.checks.append(Check(name, bool(ok), detail))


def _inclusion_rows(cert_rows):
    return [((w.a, w.b, w.c, w.offset), r.method,
             tuple((e.pred, e.succ, e.case) for e in r.embeddings))
            for w, r in cert_rows]


def _prefix_check(word: bytes, reference: str):
    ref = word_from_text(reference)
    n = min(len(word), len(ref))
    ok = n > 0 and word[:n] == ref[:n]
    return ok, f"{n} reference symbols compared"


def _scenario_dekking_verify(reg: InstanceRegistry, prefix_length: int
                             ) -> ScenarioReport:
    col = _Collector()
    refs = reg.reference_prefixes

    def cert_h():
        cert = verify_square_transfer(reg.dekking_h, reg.dekking_h_source,
                                      reg.squarefree4, name="dekking_h")
        col.artifacts["core_certificate"] = cert.to_dict()
        rows = _inclusion_rows(cert.inclusions)
        ok = (cert.complete
              and rows == [((3, 1, 2, 6), "no-right-extension", ())]
              and not cert.interchanges
              and cert.bounded.legal_counts[5] == 49)
        return ok, ("complete, 1 inclusion, 0 interchanges, "
                    f"{cert.bounded.legal_counts[5]} words at length 5")

    def cert_g():
        cert = verify_square_transfer(reg.dekking_g, reg.dekking_g_source,
                                      reg.dekking_binary,
                                      fixed_point=(reg.dekking_h, 0),
                                      name="dekking_g")
        col.artifacts["coder_certificate"] = cert.to_dict()
        rows = _inclusion_rows(cert.inclusions)
        expected = [((0, 1, 3, 3), "no-right-extension", ()),
                    ((1, 0, 2, 2), "no-right-extension", ()),
                    ((2, 3, 1, 4), "no-right-extension", ())]
        inter = [(w.a, w.b, w.c, w.split, word_to_text(w.s), word_to_text(w.t),
                  word_to_text(w.u), word_to_text(w.v))
                 for w, _ in cert.interchanges]
        ok = (cert.complete and rows == expected
              and inter == [(2, 1, 3, 4, "0110", "01", "0101", "10")]
              and all(r.ok for _, r in cert.interchanges)
              and cert.bounded.legal_counts[5] == 41)
        return ok, ("complete, 3 inclusions, 1 interchange, "
                    f"{cert.bounded.legal_counts[5]} words at length 5")

    def cert_sub():
        cert = verify_substitution_transfer(reg.dekking_sub,
                                            reg.dekking_h_source,
                                            reg.squarefree4,
                                            name="dekking_sub")
        col.artifacts["substitution_certificate"] = cert.to_dict()
        rows = _inclusion_rows(cert.inclusions)
        equal = [(key, method) for key, method, _ in
                 _inclusion_rows(cert.equal_pair_inclusions)]
        ok = (cert.complete
              and rows == [((3, 1, 2, 6), "no-right-extension", ()),
                           ((3, 4, 2, 6), "no-left-extension", ())]
              and equal == [((2, 2, 4, 4), "pair-illegal"),
                            ((4, 1, 2, 6), "pair-illegal"),
                            ((4, 4, 2, 6), "pair-illegal")])
        return ok, "complete; alternate-image rows all accounted for"

    core = fixed_point_prefix(reg.dekking_h, 0, max(2000, prefix_length // 6 + 1))
    binary = reg.dekking_g.apply(core)[:max(2000, prefix_length)]
    col.artifacts["core_prefix"] = word_to_text(core[:60])
    col.artifacts["binary_prefix"] = word_to_text(binary[:60])
    col.run("core transfer certificate", cert_h)
    col.run("coder transfer certificate", cert_g)
    col.run("substitution transfer certificate", cert_sub)
    col.run("core fixed-point prefix",
            lambda: _prefix_check(core, refs["dekking_core_50"]))
    col.run("core fixed-point prefix, extended",
            lambda: _prefix_check(core, refs["dekking_core_2000"]))
    col.run("binary word prefix",
            lambda: _prefix_check(binary, refs["dekking_binary_60"]))
    col.run("binary word prefix, extended",
            lambda: _prefix_check(binary, refs["dekking_binary_2000"]))
    col.run("binary prefix meets target spec",
            lambda: (satisfies_spec(binary[:prefix_length],
                                    reg.dekking_binary).ok,
                     f"{min(prefix_length, len(binary))} symbols scanned"))
    return ScenarioReport(
        "dekking-verify",
        ("dekking_h", "dekking_g", "dekking_sub", "dekking_h_source",
         "dekking_g_source", "squarefree4", "dekking_binary"),
        tuple(col.checks), col.artifacts)


_MOTIVATION = (
    ("12", "square", "0110"), ("12", "square", "1100"),
    ("12", "square", "1001"), ("13", "square", "0110"),
    ("21", "cube", "01"), ("32", "square", "1001"),
    ("231", "square", "10010110"), ("10302", "square", "100100110110"),
)


def _scenario_dekking_motivation(reg: InstanceRegistry, prefix_length: int
                                 ) -> ScenarioReport:
    col = _Collector()
    for source_text, kind, root_text in _MOTIVATION:
        source = word_from_text(source_text)
        root = word_from_text(root_text)
        repeat = root * (3 if kind == "cube" else 2)

        def body(source=source, repeat=repeat):
            image = reg.dekking_g.apply(source)
            ok = (contains_factor(image, repeat)
                  and not satisfies_spec(image, reg.dekking_binary).ok)
            return ok, "occurs and breaks the binary spec"

        col.run(f"image of {source_text} contains {kind} of {root_text}", body)
    return ScenarioReport("dekking-forbidden-motivation",
                          ("dekking_g", "dekking_binary"),
                          tuple(col.checks), col.artifacts)


def _scenario_fs_verify(reg: InstanceRegistry, prefix_length: int
                        ) -> ScenarioReport:
    col = _Collector()
    refs = reg.reference_prefixes

    def cert_h():
        cert = verify_square_transfer(reg.fs_h, reg.fs_h_source,
                                      AvoidanceSpec(5, square_min_root=1),
                                      name="fs_h")
        col.artifacts["core_certificate"] = cert.to_dict()
        rows = [(w.a, w.b, w.c, w.offset, word_to_text(w.t), word_to_text(w.u))
                for w, _ in cert.inclusions]
        ok = (cert.complete and not cert.interchanges
              and rows == [(3, 2, 0, 13, "0123212343234", "01232101234")]
              and cert.inclusions[0][1].method == "no-left-extension")
        return ok, "complete, 1 inclusion, 0 interchanges"

    def cert_g():
        cert = verify_square_transfer(reg.fs_g, reg.fs_g_source, reg.fs_binary,
                                      fixed_point=(reg.fs_h, 0), name="fs_g")
        col.artifacts["coder_certificate"] = cert.to_dict()
        rows = _inclusion_rows(cert.inclusions)
        expected = [
            ((0, 1, 3, 2), "embeddings",
             ((4, 3, "context-pair"), (4, 4, "context-triple"))),
            ((1, 0, 4, 2), "embeddings",
             ((3, 3, "left-pullback-forced-general"), (3, 4, "context-pair"))),
            ((1, 2, 0, 5), "no-left-extension", ()),
            ((2, 1, 4, 1), "no-right-extension", ()),
            ((2, 3, 4, 1), "no-right-extension", ()),
            ((3, 2, 0, 5), "no-left-extension", ()),
            ((3, 4, 1, 4), "embeddings",
             ((0, 0, "context-triple"), (1, 0, "context-pair"))),
            ((4, 3, 0, 4), "embeddings",
             ((0, 1, "context-pair"), (1, 1, "right-pullback-forced-general"))),
        ]
        ok = (cert.complete and not cert.interchanges and rows == expected)
        return ok, "complete, 8 live inclusions, 0 interchanges"

    def cert_sub():
        cert = verify_substitution_transfer(reg.fs_sub, reg.fs_h_target,
                                            reg.fs_g_source, name="fs_sub")
        col.artifacts["substitution_certificate"] = cert.to_dict()
        rows = _inclusion_rows(cert.inclusions)
        equal = [(key, method) for key, method, _ in
                 _inclusion_rows(cert.equal_pair_inclusions)]
        ok = (cert.complete
              and rows == [((3, 2, 0, 13), "no-left-extension", ())]
              and equal == [((0, 0, 2, 11), "pair-illegal"),
                            ((2, 2, 0, 13), "pair-illegal")])
        return ok, "complete; alternate-image rows all accounted for"

    def special_case():
        image = reg.fs_g.apply(word_from_text("434010"))
        wanted = (word_from_text("1100") + word_from_text("01110010110001") * 2
                  + word_from_text("1100"))
        ok = image == wanted and max_square_root(image) == 14
        return ok, "codes a square with root length 14"

    core = fixed_point_prefix(reg.fs_h, 0, max(2000, prefix_length // 6 + 1))
    binary = reg.fs_g.apply(core)[:max(2000, prefix_length)]
    col.artifacts["core_prefix"] = word_to_text(core[:60])
    col.artifacts["binary_prefix"] = word_to_text(binary[:60])
    col.run("core transfer certificate", cert_h)
    col.run("coder transfer certificate", cert_g)
    col.run("substitution transfer certificate", cert_sub)
    col.run("the word behind the length-6 forbidden factor", special_case)
    col.run("core fixed-point prefix, extended",
            lambda: _prefix_check(core, refs["fs_core_2000"]))
    col.run("binary word prefix, extended",
            lambda: _prefix_check(binary, refs["fs_binary_2000"]))
    col.run("binary prefix meets whitelist spec",
            lambda: (satisfies_spec(binary[:prefix_length], reg.fs_binary).ok,
                     f"{min(prefix_length, len(binary))} symbols scanned"))
    return ScenarioReport(
        "fs-verify",
        ("fs_h", "fs_g", "fs_sub", "fs_h_source", "fs_h_target",
         "fs_g_source", "fs_binary"),
        tuple(col.checks), col.artifacts)


def _pair_word(letter: int) -> bytes:
    return bytes((letter & 1, letter >> 1))


def _scenario_pu_shuffle(reg: InstanceRegistry, prefix_length: int
                         ) -> ScenarioReport:
    col = _Collector()
    refs = reg.reference_prefixes

    def equations():
        checked = 0
        for n in range(0, 7):
            for letter in range(4):
                lhs = power(reg.pu_f, n + 1, _pair_word(letter))
                core = power(reg.pu_h, n, bytes((letter,)))
                rhs = perfect_shuffle(reg.pu_g2.apply(core),
                                      reg.pu_g1.apply(core))
                if lhs != rhs:
                    return False, f"identity fails at n={n}, letter={letter}"
                checked += 1
        return True, f"{checked} identities, n up to 6"

    def doubled_prefixes():
        need = 2 * len(power(reg.pu_f, 8, b"\x00"))
        stream = fixed_point_prefix(reg.pu_f, 0, need)
        for n in range(0, 9):
            block = power(reg.pu_f, n, b"\x00")
            if stream[:2 * len(block)] != block + block:
                return False, f"doubling fails at n={n}"
        return True, "doubled prefix up to n=8"

    core_len = max(700, (prefix_length + 2) // 3)
    core = fixed_point_prefix(reg.pu_h, 0, core_len)
    even = reg.pu_g2.apply(core)[:prefix_length]
    odd = reg.pu_g1.apply(core)[:prefix_length]
    base = fixed_point_prefix(reg.pu_f, 0, 2 * prefix_length)
    col.artifacts["even_track_prefix"] = word_to_text(even[:18])
    col.artifacts["odd_track_prefix"] = word_to_text(odd[:18])
    col.artifacts["base_prefix"] = word_to_text(base[:27])

    col.run("shuffle identities", equations)
    col.run("even track prefix",
            lambda: _prefix_check(even, refs["shuffle_even_18"]))
    col.run("even track prefix, extended",
            lambda: _prefix_check(even, refs["shuffle_even_2000"]))
    col.run("odd track prefix",
            lambda: _prefix_check(odd, refs["shuffle_odd_18"]))
    col.run("odd track prefix, extended",
            lambda: _prefix_check(odd, refs["shuffle_odd_2000"]))
    col.run("base word prefix",
            lambda: _prefix_check(base, refs["shuffle_base_27"]))
    col.run("base word prefix, extended",
            lambda: _prefix_check(base, refs["shuffle_base_2000"]))
    col.run("base word doubles its own prefixes", doubled_prefixes)
    col.run("shuffling the tracks rebuilds the base word",
            lambda: (perfect_shuffle(even, odd) == base[:2 * len(even)],
                     f"{2 * len(even)} symbols compared"))
    col.run("even track squares have roots below 4",
            lambda: (max_square_root(even) <= 3,
                     f"max root {max_square_root(even)}"))
    col.run("odd track squares have roots below 4",
            lambda: (max_square_root(odd) <= 3,
                     f"max root {max_square_root(odd)}"))
    return ScenarioReport(
        "pu-shuffle", ("pu_f", "pu_h", "pu_g1", "pu_g2"),
        tuple(col.checks), col.artifacts)


_GAP_PATTERNS = (GapPattern(0, 1, 3), GapPattern(1, 0, 2),
                 GapPattern(2, 3, 1), GapPattern(3, 2, 0))
_INTERCHANGE_TRIPLES = ((0, 3, 2), (1, 2, 3), (2, 1, 0), (3, 0, 1))


def _scenario_pu_lemmas(reg: InstanceRegistry, prefix_length: int
                        ) -> ScenarioReport:
    col = _Collector()
    core = fixed_point_prefix(reg.pu_h, 0, prefix_length)

    col.run("core morphism has no inclusions",
            lambda: find_inclusions(reg.pu_h) == [])
    col.run("core morphism has no interchanges",
            lambda: find_interchanges(reg.pu_h) == [])

    def cert_core():
        cert = verify_square_transfer(reg.pu_h, reg.pu_source, reg.squarefree4,
                                      name="pu_h")
        col.artifacts["core_certificate"] = cert.to_dict()
        ok = (cert.complete and not cert.inclusions and not cert.interchanges)
        return ok, "complete, 0 inclusions, 0 interchanges"

    col.run("core transfer certificate", cert_core)
    col.run("forbidden triples absent from the core prefix",
            lambda: (satisfies_spec(core, reg.pu_source).ok,
                     f"{len(core)} symbols scanned"))
    for pattern in _GAP_PATTERNS:
        name = "".join(str(x) for x in pattern.letters())

        def body(pattern=pattern):
            return (not contains_gap_pattern(core, pattern),
                    f"{len(core)} symbols scanned")

        col.run(f"gap pattern {name[0]}.{name[1]}.{name[2]} absent", body)

    def atlas():
        coders = {"pu_g1": reg.pu_g1, "pu_g2": reg.pu_g2}
        live = {}
        for coder_name, coder in coders.items():
            for wit in find_inclusions(coder, source=reg.pu_source):
                ref = refute_inclusion(coder, wit, reg.pu_source, depth=2)
                live[(coder_name, wit.a, wit.b, wit.c, wit.offset)] = (
                    ref.method,
                    tuple((e.pred, e.succ, e.case) for e in ref.embeddings))
        pinned = {}
        for row in reg.coder_case_atlas:
            pinned[(row["coder"], row["a"], row["b"], row["c"],
                    row["offset"])] = (
                row["method"],
                tuple((e["pred"], e["succ"], e["case"])
                      for e in row["embeddings"]))
        if live != pinned:
            missing = sorted(set(pinned) - set(live))
            extra = sorted(set(live) - set(pinned))
            changed = sorted(k for k in set(live) & set(pinned)
                             if live[k] != pinned[k])
            return False, (f"missing {missing[:3]}, extra {extra[:3]}, "
                           f"changed {changed[:3]}")
        return True, f"{len(pinned)} rows match"

    col.run("coder inclusion case table", atlas)

    for coder_name in ("pu_g1", "pu_g2"):

        def body(coder_name=coder_name):
            cert = verify_square_transfer(
                getattr(reg, coder_name), reg.pu_source, reg.pu_binary,
                fixed_point=(reg.pu_h, 0), name=coder_name)
            col.artifacts[f"{coder_name}_certificate"] = cert.to_dict()
            triples = tuple((w.a, w.b, w.c) for w, _ in cert.interchanges)
            ok = (cert.complete and len(cert.inclusions) == 12
                  and triples == _INTERCHANGE_TRIPLES
                  and all(ev.complete for ev in cert.gap_evidence))
            return ok, "complete, 12 inclusions, 4 interchanges"

        col.run(f"{coder_name.replace('pu_', 'coder ')} transfer certificate",
                body)
    return ScenarioReport(
        "pu-lemmas",
        ("pu_h", "pu_g1", "pu_g2", "pu_source", "pu_binary", "squarefree4"),
        tuple(col.checks), col.artifacts)


def _scenario_counting(reg: InstanceRegistry, prefix_length: int
                       ) -> ScenarioReport:
    col = _Collector()

    def tables():
        got_g = count_avoiding(reg.dekking_binary, len(G_TABLE) - 1).counts
        got_h = count_avoiding(reg.fs_binary, len(H_TABLE) - 1).counts
        col.artifacts["dekking_counts"] = list(got_g)
        col.artifacts["fs_counts"] = list(got_h)
        if got_g != G_TABLE:
            return False, "cubefree bounded-square table mismatch"
        if got_h != H_TABLE:
            return False, "whitelist table mismatch"
        return True, f"both tables match, G_5={got_g[5]}"

    col.run("count tables", tables)

    def golden():
        auto = build_automaton(
            minimal_forbidden(AvoidanceSpec(2, (word_from_text("000"),
                                                word_from_text("111"))), 3))
        est = growth_rate(auto)
        col.artifacts["golden_estimate"] = est.to_dict()
        return (abs(est.eigenvalue - 1.6180339887) < 1e-5,
                f"eigenvalue {est.eigenvalue:.7f}")

    col.run("two-letter-run growth rate", golden)

    for label, spec, target_eig in (("dekking", reg.dekking_binary, 1.178),
                                    ("fs", reg.fs_binary, 1.135)):

        def body(label=label, spec=spec, target_eig=target_eig):
            derived = minimal_forbidden(spec, 20)
            est = growth_rate(build_automaton(derived))
            col.artifacts[f"{label}_growth"] = est.to_dict()
            col.artifacts[f"{label}_minimal_size"] = len(derived.words)
            expected = MINIMAL_SET_SIZES[label]
            size_note = ""
            if len(derived.words) != expected:
                sample = sorted(derived.words, key=lambda w: (len(w), w))[:3]
                size_note = (f"; size {len(derived.words)} differs from "
                             f"{expected}, sample "
                             + ",".join(word_to_text(w) for w in sample))
            ok = abs(est.eigenvalue - target_eig) < 0.005
            return ok, (f"{len(derived.words)} minimal words, eigenvalue "
                        f"{est.eigenvalue:.6f}{size_note}")

        col.run(f"{label} derived growth bound", body)

    def family(label, sub, outer, seed, target, denominator, size, length):
        def body():
            report = lower_bound_family(sub, outer, seed, target,
                                        exponent_denominator=denominator)
            col.artifacts[f"{label}_family"] = report.to_dict()
            words = sorted(outer.apply(img) for img in sub.iter_images(seed))
            digest = hashlib.sha256(b"".join(words)).hexdigest()
            ok = (report.family_size == size and report.word_length == length
                  and report.verified_count == size and report.exponent_check
                  and report.enumerated and digest == FAMILY_DIGESTS[label])
            return ok, (f"{report.family_size} words of length "
                        f"{report.word_length}, all verified")
        return body

    col.run("dekking lower-bound family",
            family("dekking", reg.dekking_sub, reg.dekking_g,
                   reg.dekking_h.image(0), reg.dekking_binary, 300, 4, 600))
    col.run("fs lower-bound family",
            family("fs", reg.fs_sub, reg.fs_g, reg.fs_h.image(0),
                   reg.fs_binary, 1152, 16, 3456))
    return ScenarioReport(
        "counting",
        ("dekking_binary", "fs_binary", "dekking_sub", "dekking_g",
         "fs_sub", "fs_g"),
        tuple(col.checks), col.artifacts)


SCENARIOS = {
    "dekking-verify": _scenario_dekking_verify,
    "dekking-forbidden-motivation": _scenario_dekking_motivation,
    "fs-verify": _scenario_fs_verify,
    "pu-shuffle": _scenario_pu_shuffle,
    "pu-lemmas": _scenario_pu_lemmas,
    "counting": _scenario_counting,
}


def run_scenario(name: str, registry: InstanceRegistry | None = None,
                 prefix_length: int = 100_000) -> ScenarioReport:
    """Run one named scenario; unknown names raise ValueError.

    A crash while building the scenario's words counts as a failure, not an
    error: broken registry data must never look like a passing run.
    """
    if name not in SCENARIOS:
        known = ", ".join(sorted(SCENARIOS))
        raise ValueError(f"unknown scenario {name!r} (known: {known})")
    reg = registry if registry is not None else load_registry()
    try:
        return SCENARIOS[name](reg, prefix_length)
    except Exception as exc:
        return ScenarioReport(name, (),
                              (Check("scenario setup", False,
                                     f"raised {exc!r}"),), {})


def run_all_scenarios(registry: InstanceRegistry | None = None,
                      prefix_length: int = 100_000) -> list[ScenarioReport]:
    return [run_scenario(name, registry, prefix_length)
            for name in SCENARIOS]
