"""Coordinator behind the command-line interface.

Each public method runs one subcommand and returns an Outcome: a status
("ok", "failed" or "exhausted"), a JSON-ready payload, the lines of the
human report and the certificate files it wrote.
"""

import hashlib
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from ..config.settings import OUTPUT_DIR
from ..core.hilbert import hilbert_axiom_derivation, recognize_hilbert_axiom
from ..core.kernel import CalculusConfig, Succedents, check_derivation
from ..core.natded import NJ_RULES, check_nj
from ..core.parser import parse_formula, parse_sequent, parse_term
from ..core.printer import to_text
from ..core.syntax import Eps, ParseError, Sequent
from ..core.translate import as_nj, nj_to_seq, seq_to_nj
from ..search.decide import Countermodel, Proof, SearchResult, decide, prove, refute
from ..search.saturation import SearchConfig
from ..semantics.construction import extend_with_epsilon, strictify_domains
from ..semantics.model import KripkeEpsilonModel
from ..semantics.validation import validate_model
from ..utils.corpus import ConservativityHarness, agreement_rate, read_corpus
from ..utils.serialization import (
    PathLike,
    load_derivation,
    load_model,
    model_to_dict,
    save_derivation,
    save_model,
)

logger = logging.getLogger(__name__)


@dataclass
class Outcome:
    status: str
    data: Dict[str, Any]
    lines: List[str] = field(default_factory=list)
    artifacts: List[Path] = field(default_factory=list)


def _digest(text: str) -> str:
    return hashlib.sha1(text.encode("utf-8")).hexdigest()[:12]


def _multiple(tree) -> bool:
    return any(len(node.conclusion.succedent) > 1 for _, node in tree.walk())


class Workbench:
    """Runs checks, searches and model constructions for one flag set."""

    def __init__(self, search: Optional[SearchConfig] = None,
                 out_dir: Optional[PathLike] = None):
        self.search = search or SearchConfig()
        self.out_dir = Path(out_dir) if out_dir is not None else OUTPUT_DIR

    @property
    def calculus(self) -> CalculusConfig:
        return self.search.calculus_config()

    def _target(self, name: str) -> Path:
        return self.out_dir / name

    # -- derivations -------------------------------------------------------------

    def check(self, file_path: PathLike) -> Outcome:
        """Kernel or NJ check, chosen by the rule tag of the root."""
        tree = load_derivation(file_path)
        if tree.rule in NJ_RULES:
            system = "nj"
            report = check_nj(as_nj(tree), self.calculus.eps_mode)
        else:
            system = "sequent"
            config = self.calculus
            if _multiple(tree):
                config = replace(config, succedents=Succedents.MULTIPLE)
            report = check_derivation(tree, config)
        data = {
            "file": str(file_path),
            "system": system,
            "conclusion": to_text(tree.conclusion),
            "nodes": tree.size(),
            **report.to_dict(),
        }
        lines = [f"{file_path}: {to_text(tree.conclusion)}"]
        lines += [f"  at {list(v.path)}: {v.code.value}: {v.message}" for v in report.violations]
        lines.append("accepted" if report.ok else f"rejected ({len(report.violations)} violations)")
        return Outcome("ok" if report.ok else "failed", data, lines)

    def translate(self, file_path: PathLike, to: str) -> Outcome:
        tree = load_derivation(file_path)
        if to == "nj":
            result = seq_to_nj(tree, self.calculus)
        else:
            result = nj_to_seq(as_nj(tree), self.calculus.eps_mode)
        target = self._target(f"{Path(file_path).stem}.{to}.json")
        written = save_derivation(result, target)
        data = {"file": str(file_path), "to": to, "conclusion": to_text(result.conclusion),
                "nodes": result.size(), "written": str(target) if written else None}
        lines = [f"{to_text(result.conclusion)} ({result.size()} nodes)",
                 f"written to {target}" if written else "could not write the translation"]
        return Outcome("ok" if written else "failed", data, lines,
                       [target] if written else [])

    def axiom(self, formula_text: str) -> Outcome:
        """Recognize a Hilbert axiom instance and certify its derivation."""
        formula = parse_formula(formula_text)
        instance = recognize_hilbert_axiom(formula)
        if instance is None:
            return Outcome("failed", {"formula": to_text(formula), "schema": None},
                           [f"{to_text(formula)} is not an instance of a Hilbert schema"])
        derivation = hilbert_axiom_derivation(instance)
        report = check_derivation(derivation, self.calculus)
        target = self._target(f"axiom-{_digest(to_text(formula))}.json")
        written = report.ok and save_derivation(derivation, target)
        data = {
            "formula": to_text(formula),
            "schema": instance.schema.value,
            "term": to_text(instance.term),
            "check": report.to_dict(),
            "written": str(target) if written else None,
        }
        lines = [f"{instance.schema.value} instance with term {to_text(instance.term)}",
                 "derivation accepted" if report.ok else "derivation rejected"]
        return Outcome("ok" if written else "failed", data, lines, [target] if written else [])

    # -- search ------------------------------------------------------------------

    def search_sequent(self, sequent_text: str, mode: str = "decide") -> Outcome:
        """Run decide, prove or refute and write the certificate."""
        sequent = parse_sequent(sequent_text)
        runner = {"decide": decide, "prove": prove, "refute": refute}[mode]
        result: SearchResult = runner(sequent, self.search)
        stem = f"{mode}-{_digest(to_text(sequent))}"
        return self._certify(sequent, result, stem)

    def _certify(self, sequent: Sequent, result: SearchResult, stem: str) -> Outcome:
        data: Dict[str, Any] = {"sequent": to_text(sequent), "verdict": result.verdict}
        lines = [f"{to_text(sequent)}: {result.verdict}"]
        if isinstance(result, Proof):
            target = self._target(f"{stem}.proof.json")
            if not save_derivation(result.derivation, target):
                return Outcome("failed", data, lines + ["could not write the derivation"])
            data.update(nodes=result.derivation.size(), certificate=str(target))
            lines.append(f"derivation ({result.derivation.size()} nodes) written to {target}")
            return Outcome("ok", data, lines, [target])
        if isinstance(result, Countermodel):
            target = self._target(f"{stem}.model.json")
            if not save_model(result.model, target):
                return Outcome("failed", data, lines + ["could not write the countermodel"])
            data.update(world=result.world, worlds=len(result.model.worlds),
                        certificate=str(target))
            lines.append(f"countermodel ({len(result.model.worlds)} worlds, refuted at "
                         f"{result.world}) written to {target}")
            return Outcome("failed", data, lines, [target])
        data["reason"] = result.reason
        lines.append(f"  {result.reason}")
        return Outcome("exhausted", data, lines)

    def conserve(self, corpus_path: PathLike, progress: bool = True) -> Outcome:
        """IPC and IPCε verdicts for every corpus entry, with certificates."""
        entries = read_corpus(corpus_path)
        harness = ConservativityHarness(self.search, progress=progress)
        table = harness.run(entries)
        artifacts: List[Path] = []
        for entry, plain, eps in harness.results:
            for label, result in (("ipc", plain), ("ipce", eps)):
                outcome = self._certify(entry.sequent, result, f"line{entry.line:03d}-{label}")
                artifacts += outcome.artifacts
        rate = agreement_rate(table)
        data = {
            "corpus": str(corpus_path),
            "entries": table.to_dict(orient="records"),
            "agreement": rate,
            "certificates": len(artifacts),
        }
        lines = [table.to_string(index=False) if not table.empty else "(empty corpus)",
                 f"agreement {rate:.0%} over {len(table)} entries, "
                 f"{len(artifacts)} certificates in {self.out_dir}"]
        return Outcome("ok" if rate == 1.0 else "failed", data, lines, artifacts)

    # -- models ------------------------------------------------------------------

    def evaluate(self, model_path: PathLike, formula_text: str) -> Outcome:
        """Forcing of one formula at every world."""
        model = load_model(model_path)
        formula = parse_formula(formula_text)
        values = model.evaluate(formula)
        data = {"formula": to_text(formula), "worlds": values}
        lines = [f"{w}: {'forced' if v else 'not forced'}" for w, v in values.items()]
        return Outcome("ok", data, [to_text(formula)] + lines)

    def validate(self, model_path: PathLike) -> Outcome:
        model = load_model(model_path)
        report = validate_model(model)
        lines = [f"{model_path}: {len(model.worlds)} worlds, {model.flavor.value}"]
        lines += [f"  {v.world or '-'}: {v.kind.value}: {v.message}" for v in report.violations]
        lines.append("valid" if report.ok else f"invalid ({len(report.violations)} violations)")
        data = {"file": str(model_path), **report.to_dict()}
        return Outcome("ok" if report.ok else "failed", data, lines)

    def extend(self, model_path: PathLike, terms: Sequence[str] = ()) -> Outcome:
        """Strictify an ε-free model, then give its tracked ε-terms values."""
        model = load_model(model_path)
        tracked: List[Eps] = list(model.tracked)
        for text in terms:
            term = parse_term(text)
            if not isinstance(term, Eps):
                raise ParseError(f"{text!r} is not an ε-term")
            tracked.append(term)
        stripped = KripkeEpsilonModel(worlds=model.worlds, order=model.order,
                                      domains=model.domains, atoms=model.atoms)
        extended = extend_with_epsilon(strictify_domains(stripped), tracked)
        report = validate_model(extended)
        target = self._target(f"{Path(model_path).stem}.extended.json")
        written = report.ok and save_model(extended, target)
        data = {
            "file": str(model_path),
            "tracked": sorted(to_text(t) for t in extended.tracked),
            "validation": report.to_dict(),
            "model": model_to_dict(extended),
            "written": str(target) if written else None,
        }
        lines = [f"{len(extended.tracked)} ε-terms over {len(extended.universe)} elements",
                 "valid" if report.ok else "extension failed validation"]
        if written:
            lines.append(f"written to {target}")
        return Outcome("ok" if written else "failed", data, lines, [target] if written else [])
