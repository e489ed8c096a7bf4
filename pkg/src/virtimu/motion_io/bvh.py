"""BVH (Biovision Hierarchy) parsing, serialization and forward kinematics.

Rotations compose in the channel order written for each joint (intrinsic, as the
format defines it); axes and units are kept as authored, no Y-up/Z-up conversion.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import List, Optional, TextIO, Tuple

import numpy as np
from scipy.spatial.transform import Rotation

from virtimu.core.rotations import to_wxyz
from virtimu.core.types import CHANNEL_KEYWORDS, POSITION_CHANNELS, Joint, SkeletonAnimation
from virtimu.errors import ConfigError, FormatError, InvariantViolation

logger = logging.getLogger(__name__)

_AXIS = {"Xrotation": "X", "Yrotation": "Y", "Zrotation": "Z"}
_POS_AXIS = {name: i for i, name in enumerate(POSITION_CHANNELS)}


class _Tokens:
    """Whitespace tokens of the HIERARCHY section, each tagged with its 1-based line."""

    def __init__(self, lines: List[str], path: Optional[str]):
        self.items: List[Tuple[str, int]] = []
        for lineno, line in enumerate(lines, start=1):
            for tok in line.split():
                self.items.append((tok, lineno))
        self.pos = 0
        self.path = path
        self.last_line = len(lines)

    def peek(self) -> Optional[Tuple[str, int]]:
        return self.items[self.pos] if self.pos < len(self.items) else None

    def next(self, what: str) -> Tuple[str, int]:
        item = self.peek()
        if item is None:
            raise FormatError(f"Malformed header: unexpected end of HIERARCHY, expected {what}", path=self.path, line=self.last_line)
        self.pos += 1
        return item

    def expect(self, keyword: str) -> int:
        tok, line = self.next(keyword)
        if tok != keyword:
            raise FormatError(f"Malformed header: expected {keyword!r}, found {tok!r}", path=self.path, line=line)
        return line

    def rest_of_line(self, line: int) -> List[str]:
        out = []
        while self.peek() is not None and self.peek()[1] == line:  # type: ignore[index]
            out.append(self.next("name")[0])
        return out

    def number(self, what: str) -> float:
        tok, line = self.next(what)
        try:
            return float(tok)
        except ValueError:
            raise FormatError(f"Non-numeric {what}: {tok!r}", path=self.path, line=line) from None


def _parse_joint(toks: _Tokens, name: str, parent: Optional[int], joints: List[Joint], *, end_site: bool = False) -> None:
    toks.expect("{")
    offset: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    channels: Tuple[str, ...] = ()
    index = len(joints)
    # Placeholder keeps depth-first order: a parent always precedes its children
    joints.append(Joint(name=name, parent=parent, offset=offset, channels=channels, end_site=end_site))
    seen_offset = False
    while True:
        tok, line = toks.next("'}'")
        if tok == "OFFSET":
            offset = (toks.number("OFFSET x"), toks.number("OFFSET y"), toks.number("OFFSET z"))
            seen_offset = True
        elif tok == "CHANNELS" and not end_site:
            n_tok, n_line = toks.next("channel count")
            try:
                n = int(n_tok)
            except ValueError:
                raise FormatError(f"Malformed header: channel count {n_tok!r} is not an integer", path=toks.path, line=n_line) from None
            chans = []
            for _ in range(n):
                c, c_line = toks.next("channel keyword")
                if c not in CHANNEL_KEYWORDS:
                    raise FormatError(f"Unknown channel keyword {c!r}", path=toks.path, line=c_line)
                chans.append(c)
            channels = tuple(chans)
        elif tok == "JOINT" and not end_site:
            child = " ".join(toks.rest_of_line(line))
            if not child:
                raise FormatError("Malformed header: JOINT without a name", path=toks.path, line=line)
            _parse_joint(toks, child, index, joints)
        elif tok == "End" and not end_site:
            site, site_line = toks.next("'Site'")
            if site != "Site":
                raise FormatError(f"Malformed header: expected 'End Site', found 'End {site}'", path=toks.path, line=site_line)
            _parse_joint(toks, f"{name}/End", index, joints, end_site=True)
        elif tok == "}":
            break
        else:
            raise FormatError(f"Malformed header: unexpected token {tok!r} in joint {name!r}", path=toks.path, line=line)
    if not seen_offset:
        raise FormatError(f"Malformed header: joint {name!r} has no OFFSET", path=toks.path, line=line)
    joints[index] = Joint(name=name, parent=parent, offset=offset, channels=channels, end_site=end_site)


def _header_value(line: str, key: str, lineno: int, path: Optional[str]) -> str:
    head, sep, value = line.partition(":")
    if not sep or head.strip() != key:
        raise FormatError(f"Malformed header: expected '{key}:'", path=path, line=lineno)
    return value.strip()


def parse_bvh(text: str | TextIO, *, path: Optional[str] = None) -> SkeletonAnimation:
    """Parse a complete BVH document into a SkeletonAnimation.

    Raises:
        FormatError: malformed header, channel/frame count mismatch, unknown channel
            keyword or non-numeric frame data, with the offending line number.
    """
    if not isinstance(text, str):
        text = text.read()
    lines = text.splitlines()

    motion_at = next((i for i, ln in enumerate(lines) if ln.strip() == "MOTION"), None)
    if motion_at is None:
        raise FormatError("Malformed header: missing MOTION section", path=path, line=len(lines))

    toks = _Tokens(lines[:motion_at], path)
    toks.expect("HIERARCHY")
    root_line = toks.expect("ROOT")
    root_name = " ".join(toks.rest_of_line(root_line))
    if not root_name:
        raise FormatError("Malformed header: ROOT without a name", path=path, line=root_line)
    joints: List[Joint] = []
    _parse_joint(toks, root_name, None, joints)
    extra = toks.peek()
    if extra is not None:
        tok, line = extra
        msg = "more than one ROOT joint" if tok == "ROOT" else f"unexpected token {tok!r} after hierarchy"
        raise FormatError(f"Malformed header: {msg}", path=path, line=line)

    # MOTION section: Frames, Frame Time, then one row per frame
    body = [(i + 1, ln) for i, ln in enumerate(lines[motion_at + 1 :], start=motion_at + 1) if ln.strip()]
    if len(body) < 2:
        raise FormatError("Malformed header: MOTION needs 'Frames:' and 'Frame Time:'", path=path, line=len(lines))
    (frames_line, frames_txt), (time_line, time_txt) = body[0], body[1]
    try:
        frame_count = int(_header_value(frames_txt, "Frames", frames_line, path))
    except ValueError:
        raise FormatError("Malformed header: 'Frames:' is not an integer", path=path, line=frames_line) from None
    try:
        frame_time = float(_header_value(time_txt, "Frame Time", time_line, path))
    except ValueError:
        raise FormatError("Malformed header: 'Frame Time:' is not a number", path=path, line=time_line) from None
    if not frame_time > 0:
        raise FormatError(f"Malformed header: Frame Time must be > 0, got {frame_time}", path=path, line=time_line)

    n_channels = sum(len(j.channels) for j in joints)
    rows = body[2:]
    if len(rows) != frame_count:
        line = rows[-1][0] if rows else time_line
        raise FormatError(f"Channel/frame count mismatch: header declares {frame_count} frames, found {len(rows)}", path=path, line=line)
    frames = np.empty((frame_count, n_channels), dtype=np.float64)
    for r, (lineno, row) in enumerate(rows):
        vals = row.split()
        if len(vals) != n_channels:
            raise FormatError(f"Channel/frame count mismatch: {len(vals)} values, {n_channels} channels declared", path=path, line=lineno)
        try:
            frames[r] = [float(v) for v in vals]
        except ValueError:
            bad = next(v for v in vals if not _is_float(v))
            raise FormatError(f"Non-numeric frame data {bad!r}", path=path, line=lineno) from None

    anim = SkeletonAnimation(joints=joints, frame_time=frame_time, frames=frames)
    try:
        anim.validate()
    except InvariantViolation as e:
        raise FormatError(str(e), path=path) from e
    return anim


def _is_float(v: str) -> bool:
    try:
        float(v)
        return True
    except ValueError:
        return False


def _fmt(v: float) -> str:
    return repr(float(v))


def serialize_bvh(anim: SkeletonAnimation) -> str:
    """Inverse of parse_bvh; floats are written with round-trip precision."""
    children: dict[int, list[int]] = {i: [] for i in range(len(anim.joints))}
    for i, j in enumerate(anim.joints):
        if j.parent is not None:
            children[j.parent].append(i)

    out: List[str] = ["HIERARCHY"]

    def emit(i: int, depth: int) -> None:
        j = anim.joints[i]
        pad = "\t" * depth
        if j.end_site:
            out.append(f"{pad}End Site")
        else:
            out.append(f"{pad}{'ROOT' if j.parent is None else 'JOINT'} {j.name}")
        out.append(f"{pad}{{")
        out.append(f"{pad}\tOFFSET {' '.join(_fmt(v) for v in j.offset)}")
        if not j.end_site:
            out.append(f"{pad}\tCHANNELS {len(j.channels)}{''.join(' ' + c for c in j.channels)}")
        for c in children[i]:
            emit(c, depth + 1)
        out.append(f"{pad}}}")

    emit(0, 0)
    out.append("MOTION")
    out.append(f"Frames: {anim.frame_count}")
    out.append(f"Frame Time: {_fmt(anim.frame_time)}")
    for row in anim.frames:
        out.append(" ".join(_fmt(v) for v in row))
    return "\n".join(out) + "\n"


def load_bvh(path: str | Path, *, scale: float = 1.0) -> SkeletonAnimation:
    """Read a BVH file; `scale` converts authored length units to meters (0.01 for cm)."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise FormatError(f"Cannot read BVH file: {e}", path=p) from e
    except UnicodeDecodeError as e:
        raise FormatError(f"BVH file is not valid UTF-8 (byte offset {e.start})", path=p) from e
    anim = parse_bvh(text, path=str(p))
    if scale != 1.0:
        anim = _scaled(anim, scale)
    logger.debug("Parsed %s: %d joints, %d frames", p, len(anim.joints), anim.frame_count)
    return anim


def store_bvh(anim: SkeletonAnimation, path: str | Path) -> None:
    Path(path).write_text(serialize_bvh(anim), encoding="utf-8")


def _scaled(anim: SkeletonAnimation, scale: float) -> SkeletonAnimation:
    joints = [
        Joint(j.name, j.parent, (j.offset[0] * scale, j.offset[1] * scale, j.offset[2] * scale), j.channels, j.end_site)
        for j in anim.joints
    ]
    frames = anim.frames.copy()
    for j, sl in zip(anim.joints, anim.channel_slices()):
        for k, c in enumerate(j.channels):
            if c in _POS_AXIS:
                frames[:, sl.start + k] *= scale
    return SkeletonAnimation(joints=joints, frame_time=anim.frame_time, frames=frames)


# ---------- Forward kinematics ----------

def _global_transforms(anim: SkeletonAnimation, frames: np.ndarray) -> Tuple[np.ndarray, List[Rotation]]:
    """Positions (F, J, 3) and per-joint global rotations for the given frame rows."""
    n_frames = frames.shape[0]
    n_joints = len(anim.joints)
    positions = np.zeros((n_frames, n_joints, 3))
    rotations: List[Rotation] = []
    for i, (j, sl) in enumerate(zip(anim.joints, anim.channel_slices())):
        values = frames[:, sl]
        local_t = np.broadcast_to(np.asarray(j.offset, dtype=np.float64), (n_frames, 3)).copy()
        axes = ""
        angle_cols = []
        for k, c in enumerate(j.channels):
            if c in _POS_AXIS:
                local_t[:, _POS_AXIS[c]] += values[:, k]
            else:
                axes += _AXIS[c]
                angle_cols.append(k)
        if axes:
            local_r = Rotation.from_euler(axes, values[:, angle_cols], degrees=True)
        else:
            local_r = Rotation.identity(n_frames)
        if j.parent is None:
            positions[:, i] = local_t
            rotations.append(local_r)
        else:
            parent_r = rotations[j.parent]
            positions[:, i] = positions[:, j.parent] + parent_r.apply(local_t)
            rotations.append(parent_r * local_r)
    return positions, rotations


def forward_kinematics(anim: SkeletonAnimation, frame: int) -> Tuple[np.ndarray, np.ndarray]:
    """Global joint positions (J, 3) and orientations (J, 4, wxyz) at one frame."""
    if not 0 <= frame < anim.frame_count:
        raise ConfigError(f"Frame index {frame} out of range [0, {anim.frame_count})")
    positions, rotations = _global_transforms(anim, anim.frames[frame : frame + 1])
    quats = np.stack([to_wxyz(r)[0] for r in rotations], axis=0)
    return positions[0], quats


def joint_trajectory(anim: SkeletonAnimation, joint: str) -> Tuple[np.ndarray, np.ndarray]:
    """Positions (F, 3) and orientations (F, 4, wxyz) of one joint over every frame."""
    idx = anim.joint_index(joint)
    positions, rotations = _global_transforms(anim, anim.frames)
    return positions[:, idx], to_wxyz(rotations[idx])
