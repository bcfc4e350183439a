"""The bundled example corpus and name resolution for files given on the command line."""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .errors import PoslogError
from .parser import Workspace, parse_document
from .structures import FinStructure
from .syntax import Theory

SUFFIXES = (".thy", ".struct", ".sig")


class CorpusError(PoslogError):
    """A name or file could not be resolved."""


def _root():
    return resources.files("poslog") / "corpus"


def entries() -> list:
    """``[(stem, kind, object name, description), ...]`` for every bundled file."""
    out = []
    for item in sorted(_root().iterdir(), key=lambda p: p.name):
        if not item.name.endswith(SUFFIXES):
            continue
        text = item.read_text(encoding="utf-8")
        ws = parse_document(text)
        comment = next((line.lstrip("# ").strip() for line in text.splitlines()
                        if line.startswith("#")), "")
        stem = item.name.rsplit(".", 1)[0]
        if item.name.endswith(".thy"):
            out.append((stem, "theory", list(ws.theories)[-1], comment))
        elif item.name.endswith(".struct"):
            out.append((stem, "structure", list(ws.structures)[-1], comment))
        else:
            out.append((stem, "signature", list(ws.signatures)[-1], comment))
    return out


def bundled_text(stem: str) -> str | None:
    for suffix in SUFFIXES:
        item = _root() / (stem + suffix)
        if item.is_file():
            return item.read_text(encoding="utf-8")
    return None


def load_workspace() -> Workspace:
    """Every bundled object in one workspace."""
    ws = Workspace()
    for stem, *_ in entries():
        ws.merge(parse_document(bundled_text(stem)))
    return ws


def golden() -> dict:
    return json.loads((_root() / "golden.json").read_text(encoding="utf-8"))


def _source(ref: str):
    """Text for ``ref``: an existing file, else a bundled file with the same stem."""
    path = Path(ref)
    if path.is_file():
        return path.read_text(encoding="utf-8"), str(path)
    stem = path.name
    for suffix in SUFFIXES:
        if stem.endswith(suffix):
            stem = stem[: -len(suffix)]
    text = bundled_text(stem)
    if text is not None:
        return text, f"<corpus>/{stem}"
    return None, None


def resolve(ref: str, kind: str, workspace: Workspace | None = None):
    """Load a theory or structure named by ``ref``.

    ``ref`` is a file path, optionally suffixed ``:Name`` to pick one object
    from a file holding several, a bundled corpus stem (``t_inj``) or path
    (``examples/t_inj.thy``), or the name of an object already loaded into
    ``workspace`` or the corpus (``T_inj``).
    """
    table_of = {"theory": lambda ws: ws.theories, "structure": lambda ws: ws.structures}[kind]
    name = None
    text, origin = _source(ref)
    if text is None and ":" in ref:
        base, name = ref.rsplit(":", 1)
        text, origin = _source(base)
    if text is not None:
        ws = parse_document(text, workspace)
        table = table_of(ws)
        if name is not None:
            if name not in table:
                raise CorpusError(f"no {kind} {name!r} in {origin}")
            return table[name]
        if not table:
            raise CorpusError(f"{origin} declares no {kind}")
        return list(table.values())[-1]
    for ws in filter(None, (workspace, load_workspace())):
        table = table_of(ws)
        if ref in table:
            return table[ref]
    raise CorpusError(f"cannot find {kind} {ref!r} (not a file, corpus entry or loaded name)")


def theory(ref: str, workspace=None) -> Theory:
    return resolve(ref, "theory", workspace)


def structure(ref: str, workspace=None) -> FinStructure:
    return resolve(ref, "structure", workspace)
