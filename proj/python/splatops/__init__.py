# Copyright Contributors to the splatops Project
# SPDX-License-Identifier: Apache-2.0
"""Gaussian-splat rendering, depth diagnostics and floater pruning."""

from splatops._core import (
    Camera,
    Scene,
    SplatError,
    dip,
    local_pearson_loss,
    make_toy_fixture,
    pcc,
    prune_floaters,
    psnr,
    read_cameras,
    read_depth_pfm,
    read_ply,
    render,
    sample_novel_poses,
    ssim,
    write_cameras,
    write_pfm,
    write_ply,
)

__all__ = [
    "Camera",
    "Scene",
    "SplatError",
    "dip",
    "local_pearson_loss",
    "make_toy_fixture",
    "pcc",
    "prune_floaters",
    "psnr",
    "read_cameras",
    "read_depth_pfm",
    "read_ply",
    "render",
    "sample_novel_poses",
    "ssim",
    "write_cameras",
    "write_pfm",
    "write_ply",
]

__version__ = "0.1.0"
