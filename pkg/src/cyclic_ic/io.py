"""Channel spec files and run manifests."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from . import __version__
from .channel import ChannelError, ChannelInstance, ChannelRatios, db_to_linear, derive_ratios

ANNOTATION_KEYS = {"name", "comment", "sample", "violations", "contained", "witness"}


class SpecError(ValueError):
    """Malformed channel spec; the message names the file and line or field."""


def _vec(d: dict, key: str, K: int, where: str, db: bool) -> list[float]:
    if key not in d:
        raise SpecError(f"{where}: missing field {key!r}")
    v = d[key]
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        v = [v] * K
    if not isinstance(v, list) or not all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
        raise SpecError(f"{where}: field {key!r} must be a number or a list of numbers")
    if len(v) != K:
        raise SpecError(f"{where}: field {key!r} has {len(v)} entries, expected K={K}")
    return [db_to_linear(float(x)) if db else float(x) for x in v]


def ratios_from_dict(d: Any, db: bool = False, where: str = "spec") -> ChannelRatios:
    """Build ratios from ``{K, snr, inr}`` or ``{K, gains: {direct, cross}, powers, noise}``.

    With ``db`` the ratio-valued fields (snr, inr, gains) are read in dB;
    powers and noise are always linear.
    """
    if not isinstance(d, dict):
        raise SpecError(f"{where}: expected an object, got {type(d).__name__}")
    allowed = {"K", "snr", "inr", "gains", "powers", "noise"} | ANNOTATION_KEYS
    unknown = set(d) - allowed
    if unknown:
        raise SpecError(f"{where}: unknown fields {sorted(unknown)}")
    K = d.get("K")
    if isinstance(K, bool) or not isinstance(K, int):
        raise SpecError(f"{where}: field 'K' must be an integer, got {K!r}")
    if K < 2:
        raise SpecError(f"{where}: K must be >= 2, got {K}")
    try:
        if "snr" in d or "inr" in d:
            if "gains" in d:
                raise SpecError(f"{where}: give either snr/inr or gains/powers/noise, not both")
            return ChannelRatios(K, _vec(d, "snr", K, where, db), _vec(d, "inr", K, where, db))
        gains = d.get("gains")
        if not isinstance(gains, dict):
            raise SpecError(f"{where}: need either snr/inr or gains {{direct, cross}}")
        noise = d.get("noise", 1.0)
        if isinstance(noise, bool) or not isinstance(noise, (int, float)):
            raise SpecError(f"{where}: field 'noise' must be a number")
        ch = ChannelInstance(K, _vec(gains, "direct", K, where + ".gains", db),
                             _vec(gains, "cross", K, where + ".gains", db),
                             _vec(d, "powers", K, where, False), float(noise))
        return derive_ratios(ch)
    except ChannelError as exc:
        raise SpecError(f"{where}: {exc}") from exc


def parse_json(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def load_specs(path: str | Path, db: bool = False) -> list[ChannelRatios]:
    """One spec object, or a list of them (as written to replay files)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SpecError(f"{path}: {exc.strerror}") from exc
    data = parse_json(text, str(path))
    if isinstance(data, list):
        if not data:
            raise SpecError(f"{path}: empty channel list")
        return [ratios_from_dict(d, db, f"{path}[{k}]") for k, d in enumerate(data)]
    return [ratios_from_dict(data, db, str(path))]


def load_spec(path: str | Path, db: bool = False) -> ChannelRatios:
    specs = load_specs(path, db)
    if len(specs) != 1:
        raise SpecError(f"{path}: expected a single channel, found {len(specs)}")
    return specs[0]


def digest(obj: Any) -> str:
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def file_digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


@dataclass
class RunManifest:
    command: str
    input_digest: str
    seed: Optional[int] = None
    regime: Optional[str] = None
    outputs: list[str] = field(default_factory=list)
    tool_version: str = __version__
    extra: dict = field(default_factory=dict)

    def write(self, out_dir: Path) -> Path:
        out_dir = Path(out_dir)
        doc = {
            "command": self.command,
            "input_digest": self.input_digest,
            "tool_version": self.tool_version,
            "seed": self.seed,
            "regime": self.regime,
            "outputs": [{"path": p, "sha256": file_digest(out_dir / p)} for p in self.outputs],
            **self.extra,
        }
        path = out_dir / "manifest.json"
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return path


class OutputDir:
    """Writes files into one directory and remembers what it wrote."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.mkdir(parents=True, exist_ok=True)
        self.written: list[str] = []

    def write(self, name: str, text: str) -> Path:
        p = self.path / name
        p.write_text(text)
        if name not in self.written:
            self.written.append(name)
        return p
