"""Corpus files and the IPC / IPCε agreement table.

A corpus file holds one sequent per line. Text after ``#`` is a comment;
a comment of the form ``# EXPECT provable`` records the expected verdict.
A line without ``=>`` is read as a formula to be proved from no assumptions.
"""

import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import pandas as pd
from tqdm import tqdm

from ..config.settings import CORPUS_SETTINGS
from ..core.kernel import Calculus
from ..core.parser import parse_sequent
from ..core.printer import to_text
from ..core.syntax import ParseError, Sequent, contains_eps
from ..search.decide import Countermodel, Proof, SearchResult, decide
from ..search.saturation import SearchConfig

logger = logging.getLogger(__name__)

VERDICT_OF_EXPECTATION = {"provable": "proved", "refutable": "refuted", "unknown": None}


@dataclass(frozen=True)
class CorpusEntry:
    line: int
    sequent: Sequent
    expect: Optional[str] = None

    @property
    def text(self) -> str:
        return to_text(self.sequent)


def parse_corpus_line(raw: str, line: int = 1) -> Optional[CorpusEntry]:
    """The entry on one corpus line, None for blank and comment-only lines.

    Raises:
        ParseError: for a bad sequent or an unknown expectation.
    """
    body, _, comment = raw.partition(CORPUS_SETTINGS["comment"])
    body = body.strip()
    if not body:
        return None
    expect = None
    words = comment.split()
    if words and words[0] == CORPUS_SETTINGS["expect_marker"]:
        if len(words) < 2 or words[1] not in CORPUS_SETTINGS["expectations"]:
            raise ParseError("EXPECT needs one of " + ", ".join(CORPUS_SETTINGS["expectations"]),
                             line)
        expect = words[1]
    text = body if "=>" in body else f"=> {body}"
    try:
        sequent = parse_sequent(text)
    except ParseError as exc:
        raise ParseError(f"corpus entry {body!r} ({exc})", line) from None
    return CorpusEntry(line, sequent, expect)


def read_corpus(file_path: Union[str, Path]) -> List[CorpusEntry]:
    """Every entry of a corpus file in file order.

    Raises:
        FileNotFoundError: if the file does not exist.
        ParseError: naming the offending line.
    """
    file_path = Path(file_path)
    entries = []
    for number, raw in enumerate(file_path.read_text(encoding="utf-8").splitlines(), 1):
        entry = parse_corpus_line(raw, number)
        if entry is not None:
            entries.append(entry)
    logger.info("Read %d corpus entries from %s", len(entries), file_path)
    return entries


class ConservativityHarness:
    """Decides every ε-free entry in IPC and in IPCε and compares the verdicts.

    ``results`` keeps the certified results per entry, in input order, so
    that callers can write the certificates.
    """

    COLUMNS = ["line", "sequent", "expect", "ipc", "ipce", "agree", "expected"]

    def __init__(self, cfg: Optional[SearchConfig] = None, progress: bool = True):
        base = cfg or SearchConfig()
        self.ipc_cfg = replace(base, calculus=Calculus.IPC)
        self.eps_cfg = replace(base, calculus=Calculus.IPC_EPS)
        self.progress = progress
        self.results: List[Tuple[CorpusEntry, SearchResult, SearchResult]] = []

    def run(self, entries: List[CorpusEntry]) -> pd.DataFrame:
        self.results = []
        rows: List[Dict[str, object]] = []
        for entry in tqdm(entries, desc="conserve", disable=not self.progress):
            if contains_eps(entry.sequent):
                logger.warning("Line %d is not ε-free, skipped", entry.line)
                continue
            plain = decide(entry.sequent, self.ipc_cfg)
            eps = decide(entry.sequent, self.eps_cfg)
            self.results.append((entry, plain, eps))
            rows.append(self._row(entry, plain, eps))
        return pd.DataFrame(rows, columns=self.COLUMNS)

    @staticmethod
    def _row(entry: CorpusEntry, plain: SearchResult, eps: SearchResult) -> Dict[str, object]:
        wanted = VERDICT_OF_EXPECTATION.get(entry.expect or "unknown")
        return {
            "line": entry.line,
            "sequent": entry.text,
            "expect": entry.expect or "",
            "ipc": plain.verdict,
            "ipce": eps.verdict,
            "agree": plain.verdict == eps.verdict,
            "expected": wanted is None or (plain.verdict == wanted and eps.verdict == wanted),
        }


def agreement_rate(table: pd.DataFrame) -> float:
    """Share of rows whose two verdicts agree (1.0 for an empty table)."""
    if table.empty:
        return 1.0
    return float(table["agree"].mean())


def decided(result: SearchResult) -> bool:
    return isinstance(result, (Proof, Countermodel))
