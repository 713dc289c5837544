"""Text artifacts: CSV tables, JSON sidecars and channel/beamformer dumps.

Dump format (one file per realization)::

    # hbfkit channel v1
    <n_rx> <n_tx> <n_subcarriers>
    <K blocks of n_rx lines, each with n_tx space-separated "re,im" pairs,
     blocks separated by a blank line>

Beamformer dumps use the same block layout, one ``@name rows cols count``
header line per matrix stack.
"""

from __future__ import annotations

import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .beamform import HybridBeamformer
from .channel import ChannelRealization

CHANNEL_MAGIC = "# hbfkit channel v1"
BEAMFORMER_MAGIC = "# hbfkit beamformer v1"

RECORDS_HEADER = "axis,axis_value,algorithm,realization,se_bits_per_hz"
SUMMARY_HEADER = "axis,axis_value,algorithm,mean_se"
COMPLEXITY_HEADER = "L,algorithm,flops,reduction_vs_lsaa"


def fmt(x) -> str:
    """12 significant digits, the precision used in every CSV."""
    return f"{float(x):.12g}"


def atomic_write(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _axis_value(v) -> str:
    return str(int(v)) if float(v).is_integer() else fmt(v)


def records_csv(result) -> str:
    lines = [RECORDS_HEADER]
    for i, v in enumerate(result.values):
        for alg, rec in result.records.items():
            for r, se in enumerate(rec[i]):
                lines.append(f"{result.axis},{_axis_value(v)},{alg},{r},{fmt(se)}")
    return "\n".join(lines) + "\n"


def summary_csv(result) -> str:
    lines = [SUMMARY_HEADER]
    means = result.mean_se
    for i, v in enumerate(result.values):
        for alg in result.records:
            lines.append(f"{result.axis},{_axis_value(v)},{alg},{fmt(means[alg][i])}")
    return "\n".join(lines) + "\n"


def complexity_csv(rows) -> str:
    lines = [COMPLEXITY_HEADER]
    lines += [f"{L},{alg},{int(fl)},{fmt(red)}" for L, alg, fl, red in rows]
    return "\n".join(lines) + "\n"


def metadata_json(meta: dict) -> str:
    return json.dumps(meta, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _write_blocks(out, stack: np.ndarray) -> None:
    for k, mat in enumerate(stack):
        if k:
            out.write("\n")
        for row in mat:
            out.write(" ".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in row) + "\n")


def _read_blocks(lines, count, rows, cols) -> np.ndarray:
    data = np.empty((count, rows, cols), dtype=complex)
    body = [ln for ln in lines if ln.strip()]
    if len(body) < count * rows:
        raise ValueError("dump truncated")
    for idx in range(count * rows):
        fields = body[idx].split()
        if len(fields) != cols:
            raise ValueError(f"expected {cols} entries on data line {idx}, got {len(fields)}")
        for c, pair in enumerate(fields):
            re, im = pair.split(",")
            data[idx // rows, idx % rows, c] = complex(float(re), float(im))
    return data, body[count * rows:]


def dump_channel(channels: ChannelRealization) -> str:
    out = io.StringIO()
    out.write(CHANNEL_MAGIC + "\n")
    out.write(f"{channels.n_rx} {channels.n_tx} {channels.n_subcarriers}\n")
    _write_blocks(out, channels.per_subcarrier)
    return out.getvalue()


def load_channel(text: str) -> ChannelRealization:
    lines = text.splitlines()
    if not lines or lines[0].strip() != CHANNEL_MAGIC:
        raise ValueError("not a channel dump")
    n_rx, n_tx, K = (int(t) for t in lines[1].split())
    data, rest = _read_blocks(lines[2:], K, n_rx, n_tx)
    if rest:
        raise ValueError("trailing data after channel blocks")
    return ChannelRealization(per_subcarrier=data)


def dump_beamformer(bf: HybridBeamformer) -> str:
    out = io.StringIO()
    out.write(BEAMFORMER_MAGIC + "\n")
    for name in ("f_rf", "f_bb", "w_rf", "w_bb"):
        arr = getattr(bf, name)
        stack = arr[np.newaxis] if arr.ndim == 2 else arr
        out.write(f"@{name} {stack.shape[1]} {stack.shape[2]} {stack.shape[0]}\n")
        _write_blocks(out, stack)
    return out.getvalue()


def load_beamformer(text: str) -> HybridBeamformer:
    lines = text.splitlines()
    if not lines or lines[0].strip() != BEAMFORMER_MAGIC:
        raise ValueError("not a beamformer dump")
    rest = [ln for ln in lines[1:] if ln.strip()]
    parts = {}
    while rest:
        head = rest[0].split()
        if not head[0].startswith("@"):
            raise ValueError(f"expected a section header, got {rest[0]!r}")
        rows, cols, count = (int(t) for t in head[1:])
        data, rest = _read_blocks(rest[1:], count, rows, cols)
        parts[head[0][1:]] = data
    return HybridBeamformer(f_rf=parts["f_rf"][0], f_bb=parts["f_bb"],
                            w_rf=parts["w_rf"][0], w_bb=parts["w_bb"])
