"""JSON files for derivations and models."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Union

from ..config.settings import JSON_SETTINGS
from ..core.checker import ProofTree
from ..core.kernel import Derivation
from ..core.natded import NJ_RULES, NJDerivation
from ..core.parser import parse_formula, parse_sequent, parse_term
from ..core.printer import canonical, to_text
from ..core.syntax import Atom, Eps, ParseError
from ..semantics.model import Flavor, KripkeEpsilonModel, close_order

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


# ---------------------------------------------------------------------------
# Derivations


def derivation_to_dict(tree: ProofTree) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "rule": tree.rule,
        "conclusion": to_text(tree.conclusion),
        "premises": [derivation_to_dict(p) for p in tree.premises],
    }
    if tree.witness is not None:
        data["witness"] = to_text(tree.witness)
    if tree.eigen is not None:
        data["eigen"] = tree.eigen
    if tree.cut_formula is not None:
        data["cut_formula"] = to_text(tree.cut_formula)
    return data


def derivation_from_dict(data: Any, path: str = "root") -> ProofTree:
    """Rebuild a derivation; NJ rule tags give an NJDerivation.

    Raises:
        ParseError: for a malformed node, naming its position.
    """
    if not isinstance(data, dict) or "rule" not in data or "conclusion" not in data:
        raise ParseError(f"derivation node at {path} needs 'rule' and 'conclusion'")
    premises = data.get("premises", [])
    if not isinstance(premises, list):
        raise ParseError(f"derivation node at {path}: 'premises' must be a list")
    rule = data["rule"]
    cls = NJDerivation if rule in NJ_RULES else Derivation
    witness = data.get("witness")
    cut = data.get("cut_formula")
    return cls(
        conclusion=parse_sequent(data["conclusion"]),
        rule=rule,
        premises=tuple(derivation_from_dict(p, f"{path}.{i}") for i, p in enumerate(premises)),
        witness=None if witness is None else parse_term(witness),
        eigen=data.get("eigen"),
        cut_formula=None if cut is None else parse_formula(cut),
    )


# ---------------------------------------------------------------------------
# Models


def model_to_dict(model: KripkeEpsilonModel) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "flavor": model.flavor.value,
        "worlds": list(model.worlds),
        "order": [list(pair) for pair in sorted(model.order)],
        "domains": {w: [to_text(e) for e in model.domain(w)] for w in model.worlds},
        "atoms": {w: [to_text(a) for a in canonical(model.atoms.get(w, ()))]
                  for w in model.worlds},
        "tracked": [to_text(t) for t in canonical(model.tracked)],
        "element_order": [to_text(e) for e in model.element_order],
    }
    if model.flavor is Flavor.EPSBOT:
        valuation: Dict[str, Dict[str, str]] = {w: {} for w in model.worlds}
        for (world, term), value in model.valuation.items():
            valuation.setdefault(world, {})[to_text(term)] = to_text(value)
        data["valuation"] = valuation
    return data


def _atom(text: str) -> Atom:
    formula = parse_formula(text)
    if not isinstance(formula, Atom):
        raise ParseError(f"{text!r} is not an atomic formula")
    return formula


def _eps(text: str) -> Eps:
    term = parse_term(text)
    if not isinstance(term, Eps):
        raise ParseError(f"{text!r} is not an ε-term")
    return term


def model_from_dict(data: Any) -> KripkeEpsilonModel:
    """Rebuild a model; the order is closed transitively.

    Raises:
        ParseError: for missing sections or unparsable entries.
    """
    if not isinstance(data, dict):
        raise ParseError("a model file holds a JSON object")
    missing = [k for k in ("worlds", "domains") if k not in data]
    if missing:
        raise ParseError(f"model file lacks {', '.join(missing)}")
    try:
        flavor = Flavor(data.get("flavor", Flavor.TERM.value))
    except ValueError:
        raise ParseError(f"unknown model flavor {data.get('flavor')!r}") from None
    worlds = tuple(str(w) for w in data["worlds"])
    order = close_order((str(a), str(b)) for a, b in data.get("order", []))
    domains = {w: frozenset(parse_term(e) for e in data["domains"].get(w, [])) for w in worlds}
    atoms = {w: frozenset(_atom(a) for a in data.get("atoms", {}).get(w, [])) for w in worlds}
    valuation = {}
    for world, entries in (data.get("valuation") or {}).items():
        for term, value in entries.items():
            valuation[(str(world), _eps(term))] = parse_term(value)
    tracked = frozenset(_eps(t) for t in data.get("tracked", []))
    element_order = tuple(parse_term(e) for e in data.get("element_order", []))
    return KripkeEpsilonModel(
        worlds=worlds,
        order=order,
        domains=domains,
        atoms=atoms,
        flavor=flavor,
        valuation=valuation,
        tracked=tracked,
        element_order=element_order,
    )


# ---------------------------------------------------------------------------
# Files


def read_json(file_path: PathLike) -> Any:
    """Load a JSON file.

    Raises:
        FileNotFoundError: if the file does not exist.
        ParseError: for invalid JSON, with its location.
    """
    file_path = Path(file_path)
    text = file_path.read_text(encoding=JSON_SETTINGS["encoding"])
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{file_path}: {exc.msg}", exc.lineno, exc.colno) from None


def dumps(data: Any) -> str:
    return json.dumps(
        data,
        indent=JSON_SETTINGS["indent"],
        sort_keys=JSON_SETTINGS["sort_keys"],
        ensure_ascii=JSON_SETTINGS["ensure_ascii"],
    )


def save_json_safe(data: Any, file_path: PathLike) -> bool:
    """Write ``data`` as JSON, creating parent directories.

    Returns:
        True if successful, False otherwise
    """
    file_path = Path(file_path)
    try:
        file_path.parent.mkdir(parents=True, exist_ok=True)
        file_path.write_text(dumps(data) + "\n", encoding=JSON_SETTINGS["encoding"])
        logger.info("Saved %s", file_path)
        return True
    except OSError as e:
        logger.error("Error saving %s: %s", file_path, e)
        return False


def load_derivation(file_path: PathLike) -> ProofTree:
    return derivation_from_dict(read_json(file_path))


def load_model(file_path: PathLike) -> KripkeEpsilonModel:
    return model_from_dict(read_json(file_path))


def save_derivation(tree: ProofTree, file_path: PathLike) -> bool:
    return save_json_safe(derivation_to_dict(tree), file_path)


def save_model(model: KripkeEpsilonModel, file_path: PathLike) -> bool:
    return save_json_safe(model_to_dict(model), file_path)


def list_json(directory: PathLike) -> List[Path]:
    """JSON files of a directory in name order (manifest excluded)."""
    directory = Path(directory)
    if not directory.is_dir():
        logger.warning("Directory not found: %s", directory)
        return []
    return sorted(p for p in directory.glob("*.json") if p.name != "manifest.json")
