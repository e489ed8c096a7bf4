from __future__ import annotations

import numpy as np
import pytest

from virtimu.errors import ConfigError, FormatError
from virtimu.motion_io import forward_kinematics, joint_trajectory, load_bvh, parse_bvh, serialize_bvh, store_bvh
from tests.helpers import BVH_BRANCHING, BVH_CORPUS, BVH_TWO_BONE


@pytest.mark.parametrize("name", sorted(BVH_CORPUS))
def test_parse_serialize_parse_is_a_fixpoint(name):
    first = parse_bvh(BVH_CORPUS[name])
    again = parse_bvh(serialize_bvh(first))
    assert again == first
    assert serialize_bvh(again) == serialize_bvh(first)


def test_hierarchy_is_depth_first_with_end_sites():
    anim = parse_bvh(BVH_BRANCHING)
    names = [j.name for j in anim.joints]
    assert names == [
        "Hips",
        "LeftUpLeg",
        "LeftLeg",
        "LeftLeg/End",
        "RightUpLeg",
        "RightLeg",
        "RightLeg/End",
        "Spine",
        "Spine/End",
    ]
    for i, j in enumerate(anim.joints[1:], start=1):
        assert j.parent < i
    assert anim.joints[3].end_site and anim.joints[3].channels == ()
    assert anim.channel_count == 21
    assert anim.frame_count == 3
    assert anim.sample_rate == pytest.approx(1 / 0.008333)


def test_two_bone_forward_kinematics_matches_hand_oracle():
    anim = parse_bvh(BVH_TWO_BONE)
    expected = {
        0: [[0, 0, 0], [1, 0, 0], [2, 0, 0]],
        1: [[0, 0, 0], [0, 1, 0], [0, 2, 0]],
        2: [[0, 0, 0], [0, 1, 0], [-1, 1, 0]],
    }
    for frame, pos in expected.items():
        positions, quats = forward_kinematics(anim, frame)
        np.testing.assert_allclose(positions, pos, atol=1e-9)
        np.testing.assert_allclose(np.linalg.norm(quats, axis=1), 1.0, atol=1e-12)

    _, quats = forward_kinematics(anim, 2)
    # elbow turned 180 degrees about z in total
    assert abs(quats[1, 0]) == pytest.approx(0.0, abs=1e-9)
    assert abs(quats[1, 3]) == pytest.approx(1.0, abs=1e-9)


def test_joint_trajectory_agrees_with_per_frame_fk():
    anim = parse_bvh(BVH_BRANCHING)
    positions, quats = joint_trajectory(anim, "LeftLeg/End")
    idx = anim.joint_index("LeftLeg/End")
    for f in range(anim.frame_count):
        p, q = forward_kinematics(anim, f)
        np.testing.assert_allclose(positions[f], p[idx], atol=1e-12)
        np.testing.assert_allclose(quats[f], q[idx], atol=1e-12)


def test_fk_rejects_out_of_range_frame():
    anim = parse_bvh(BVH_TWO_BONE)
    with pytest.raises(ConfigError):
        forward_kinematics(anim, 3)


def test_unknown_joint_is_a_config_error():
    with pytest.raises(ConfigError):
        joint_trajectory(parse_bvh(BVH_TWO_BONE), "Knee")


def test_unknown_channel_keyword_reports_line():
    text = BVH_TWO_BONE.replace("CHANNELS 1 Zrotation", "CHANNELS 1 Wrotation")
    with pytest.raises(FormatError) as err:
        parse_bvh(text, path="arm.bvh")
    assert err.value.line == 9
    assert "Wrotation" in str(err.value)
    assert str(err.value).startswith("arm.bvh:9")


def test_frame_count_mismatch():
    text = BVH_TWO_BONE.replace("Frames: 3", "Frames: 4")
    with pytest.raises(FormatError, match="frame count mismatch"):
        parse_bvh(text)


def test_row_width_mismatch_reports_row_line():
    lines = BVH_TWO_BONE.splitlines()
    lines[-1] = "0 0 0 90 0 0"
    with pytest.raises(FormatError) as err:
        parse_bvh("\n".join(lines) + "\n")
    assert err.value.line == len(lines)


def test_non_numeric_frame_value():
    text = BVH_TWO_BONE.replace("0 0 0 90 0 0 90", "0 0 0 90 zero 0 90")
    with pytest.raises(FormatError, match="Non-numeric"):
        parse_bvh(text)


def test_second_root_is_rejected():
    head, motion = BVH_TWO_BONE.split("MOTION")
    extra = "ROOT Other\n{\n\tOFFSET 0 0 0\n\tCHANNELS 0\n}\n"
    with pytest.raises(FormatError, match="more than one ROOT"):
        parse_bvh(head + extra + "MOTION" + motion)


def test_missing_motion_section():
    with pytest.raises(FormatError, match="MOTION"):
        parse_bvh(BVH_TWO_BONE.split("MOTION")[0])


def test_load_with_scale_converts_lengths(tmp_path):
    path = tmp_path / "arm.bvh"
    store_bvh(parse_bvh(BVH_TWO_BONE), path)
    anim = load_bvh(path, scale=0.01)
    positions, _ = forward_kinematics(anim, 2)
    np.testing.assert_allclose(positions[2], [-0.01, 0.01, 0.0], atol=1e-12)


def test_load_missing_file_is_a_format_error(tmp_path):
    with pytest.raises(FormatError):
        load_bvh(tmp_path / "nope.bvh")


def test_load_undecodable_file_is_a_format_error(tmp_path):
    path = tmp_path / "bad.bvh"
    path.write_bytes(b"HIERARCHY\nROOT \xff\xfe\n")
    with pytest.raises(FormatError, match="UTF-8"):
        load_bvh(path)
