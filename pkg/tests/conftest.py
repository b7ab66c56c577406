"""Pytest configuration and shared fixtures."""

import os

import numpy as np
import pytest
from PIL import Image

from model import ArchConfig, parse_arch

# Keep tests on a single process and quiet logs
os.environ.setdefault("TEMVIRO_THREADS", "0")
os.environ.setdefault("TEMVIRO_LOG_LEVEL", "WARNING")


TINY_ARCH_TEXT = """\
ARCH_VERSION=1
NUM_CLASSES=3
INPUT_SIZE=72
MODE=fused
BRANCH1="conv2d:2:3:sigmoid,maxpool2d:3,conv2d:3:3:sigmoid,maxpool2d:3,conv2d:4:3:relu,batchnorm,maxpool2d:3,flatten"
BRANCH2="conv2d:2:3:relu,maxpool2d:3,conv2d:3:3:relu,maxpool2d:3,conv2d:4:3:relu,conv2d:5:3:relu,batchnorm,maxpool2d:3,flatten"
CLASSIFIER="dense:8:relu,dense:8:relu,dropout:0.2,dense:8:relu,dense:8:relu,dense:3:softmax"
"""


@pytest.fixture
def tiny_arch_text():
    """Architecture text for a 3-class network on 72x72 inputs."""
    return TINY_ARCH_TEXT


@pytest.fixture
def tiny_arch() -> ArchConfig:
    """Small architecture that keeps training tests fast."""
    return parse_arch(TINY_ARCH_TEXT)


@pytest.fixture
def tiny_arch_file(tmp_path):
    """TINY_ARCH_TEXT written to disk."""
    path = tmp_path / "tiny.cfg"
    path.write_text(TINY_ARCH_TEXT, encoding="utf-8")
    return path


@pytest.fixture
def rng():
    """Seeded generator for test inputs."""
    return np.random.default_rng(1234)


@pytest.fixture
def pgm_2x2(tmp_path):
    """2x2 binary PGM with pixels [[0, 255], [17, 34]]."""
    path = tmp_path / "tiny.pgm"
    path.write_bytes(b"P5\n2 2\n255\n" + bytes([0, 255, 17, 34]))
    return path


def write_gray(path, pixels) -> None:
    """Save a uint8 array as a grayscale image; format follows the suffix."""
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(np.asarray(pixels, dtype=np.uint8)).save(path)


@pytest.fixture
def class_tree(tmp_path):
    """
    Three class directories of random 20x20 PGMs: 4, 6 and 5 images.

    Returns the root directory.
    """
    root = tmp_path / "tree"
    gen = np.random.default_rng(7)
    for name, count in (("alpha", 4), ("beta", 6), ("gamma", 5)):
        for i in range(count):
            write_gray(root / name / f"{i:03d}.pgm", gen.integers(0, 256, size=(20, 20)))
    return root


@pytest.fixture(scope="session")
def synth_dataset(tmp_path_factory):
    """
    Three-class 72x72 grating dataset: 8 train and 4 test images per class.

    Returns (manifest, manifest_path).
    """
    from trainer.synth import synth

    out = tmp_path_factory.mktemp("synth")
    return synth(out, classes=3, train_per_class=8, test_per_class=4, seed=0, size=72)
