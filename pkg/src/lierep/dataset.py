"""MNIST-Live data: IDX ingestion and boosted spacetime point-cloud generation.

Each cloud is 64 events (t, x, ...) with times uniform on [-1/2, 1/2] and
spatial positions drawn from a digit image's intensity distribution, mapped
to [-1/2, 1/2]^2.  Training clouds are at rest; evaluation clouds get a random
rotation and Lorentz boost.  Units use c = 1.
"""

from __future__ import annotations

import io
import json
import struct
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError, FormatError

IMAGE_MAGIC = 0x00000803
LABEL_MAGIC = 0x00000801
NUM_POINTS = 64
TIME_HALF_WIDTH = 0.5

STC_MAGIC = b"STC1"
STC_VERSION = 1


@dataclass
class DigitImage:
    pixels: np.ndarray  # (rows, cols) intensities in [0, 1]
    label: int


@dataclass
class PoincareTransform:
    """Rotation, then boost of velocity v (|v| < 1), then translation."""

    velocity: np.ndarray
    rotation: np.ndarray | None = None
    translation: np.ndarray | None = None

    def __post_init__(self):
        v = np.asarray(self.velocity, dtype=float)
        if np.linalg.norm(v) >= 1.0:
            raise DomainError(f"|velocity| must be < 1 (c = 1), got {np.linalg.norm(v):.3f}")
        self.velocity = v
        d = len(v)
        self.rotation = np.eye(d) if self.rotation is None else np.asarray(self.rotation, float)
        self.translation = (np.zeros(d + 1) if self.translation is None
                            else np.asarray(self.translation, float))

    def boost_matrix(self) -> np.ndarray:
        v = self.velocity
        d = len(v)
        mat = np.eye(d + 1)
        speed_sq = float(v @ v)
        if speed_sq == 0.0:
            return mat
        gamma = 1.0 / np.sqrt(1.0 - speed_sq)
        mat[0, 0] = gamma
        mat[0, 1:] = -gamma * v
        mat[1:, 0] = -gamma * v
        mat[1:, 1:] = np.eye(d) + (gamma - 1.0) * np.outer(v, v) / speed_sq
        return mat

    def matrix(self) -> np.ndarray:
        """Homogeneous part: boost after spatial rotation."""
        d = len(self.velocity)
        rot = np.eye(d + 1)
        rot[1:, 1:] = self.rotation
        return self.boost_matrix() @ rot

    def inverse(self) -> "PoincareTransform":
        """Transform undoing this one, in the same rotation-then-boost form."""
        rot_inv = self.rotation.T
        v_inv = -rot_inv @ self.velocity
        lam_inv = np.linalg.inv(self.matrix())
        return PoincareTransform(v_inv, rot_inv, -lam_inv @ self.translation)


@dataclass
class CloudMeta:
    velocity: np.ndarray
    rotation: np.ndarray
    translation: np.ndarray
    source_index: int = -1
    sample_seed: int = 0


@dataclass
class SpacetimeCloud:
    points: np.ndarray  # (NUM_POINTS, 1 + spatial_dims), column 0 is time
    label: int
    meta: CloudMeta

    @property
    def spatial_dims(self) -> int:
        return self.points.shape[1] - 1


def read_idx(image_bytes: bytes, label_bytes: bytes) -> list[DigitImage]:
    """Parse big-endian IDX image/label files into unit-scaled digit images."""
    images = _parse_idx_images(image_bytes)
    labels = _parse_idx_labels(label_bytes)
    if len(images) != len(labels):
        raise FormatError(
            f"image count {len(images)} does not match label count {len(labels)}")
    return [DigitImage(img, int(lab)) for img, lab in zip(images, labels)]


def _read_be32(data: bytes, offset: int, what: str) -> int:
    if offset + 4 > len(data):
        raise FormatError(f"truncated file: {what} missing at byte offset {offset}")
    return struct.unpack_from(">I", data, offset)[0]


def _parse_idx_images(data: bytes) -> np.ndarray:
    magic = _read_be32(data, 0, "image magic")
    if magic != IMAGE_MAGIC:
        raise FormatError(
            f"bad image magic at byte offset 0: expected {IMAGE_MAGIC:#010x}, found {magic:#010x}")
    count = _read_be32(data, 4, "image count")
    rows = _read_be32(data, 8, "row count")
    cols = _read_be32(data, 12, "column count")
    need = 16 + count * rows * cols
    if len(data) < need:
        raise FormatError(f"truncated image file: expected {need} bytes, found {len(data)}")
    raw = np.frombuffer(data, dtype=np.uint8, count=count * rows * cols, offset=16)
    return raw.reshape(count, rows, cols).astype(float) / 255.0


def _parse_idx_labels(data: bytes) -> np.ndarray:
    magic = _read_be32(data, 0, "label magic")
    if magic != LABEL_MAGIC:
        raise FormatError(
            f"bad label magic at byte offset 0: expected {LABEL_MAGIC:#010x}, found {magic:#010x}")
    count = _read_be32(data, 4, "label count")
    if len(data) < 8 + count:
        raise FormatError(f"truncated label file: expected {8 + count} bytes, found {len(data)}")
    return np.frombuffer(data, dtype=np.uint8, count=count, offset=8).copy()


def load_idx_files(image_path: str, label_path: str) -> list[DigitImage]:
    with open(image_path, "rb") as fh:
        image_bytes = fh.read()
    with open(label_path, "rb") as fh:
        label_bytes = fh.read()
    return read_idx(image_bytes, label_bytes)


def sample_cloud(img: DigitImage, seed, spatial_dims: int = 2, jitter: bool = True,
                 num_points: int = NUM_POINTS) -> SpacetimeCloud:
    """Draw events: uniform times, pixel positions weighted by intensity.

    Pixel centers map to [-1/2, 1/2]^2 (row 0 at the top maps to largest y);
    jitter spreads each point uniformly over its one-pixel-wide cell.  A third
    spatial dimension embeds the digit in the z=0 plane with the same jitter.
    """
    if spatial_dims not in (2, 3):
        raise DomainError("spatial_dims must be 2 or 3")
    pixels = np.asarray(img.pixels, dtype=float)
    total = pixels.sum()
    if total <= 0.0:
        raise DomainError("image has no positive intensity to sample from")
    rows, cols = pixels.shape
    rng = np.random.default_rng(seed)
    times = rng.uniform(-TIME_HALF_WIDTH, TIME_HALF_WIDTH, size=num_points)
    flat = rng.choice(rows * cols, size=num_points, p=(pixels / total).ravel())
    r, c = np.divmod(flat, cols)
    x = (c + 0.5) / cols - 0.5
    y = 0.5 - (r + 0.5) / rows
    coords = [times, x, y]
    if spatial_dims == 3:
        coords.append(np.zeros(num_points))
    pts = np.column_stack(coords)
    if jitter:
        width = np.array([0.0] + [1.0 / cols, 1.0 / rows] + ([1.0 / cols] if spatial_dims == 3 else []))
        pts = pts + rng.uniform(-0.5, 0.5, size=pts.shape) * width
    meta = CloudMeta(np.zeros(spatial_dims), np.eye(spatial_dims),
                     np.zeros(spatial_dims + 1), sample_seed=_seed_int(seed))
    return SpacetimeCloud(pts, img.label, meta)


def _seed_int(seed) -> int:
    if isinstance(seed, np.random.SeedSequence):
        return int(seed.generate_state(1)[0])
    return int(seed)


def lorentz_boost(cloud: SpacetimeCloud, tf: PoincareTransform) -> SpacetimeCloud:
    """Apply rotation, boost, translation to every event; intervals are preserved."""
    if len(tf.velocity) != cloud.spatial_dims:
        raise DomainError(
            f"velocity has {len(tf.velocity)} components for a {cloud.spatial_dims}-d cloud")
    lam = tf.matrix()
    pts = cloud.points @ lam.T + tf.translation
    meta = replace(cloud.meta, velocity=tf.velocity.copy(), rotation=tf.rotation.copy(),
                   translation=tf.translation.copy())
    return SpacetimeCloud(pts, cloud.label, meta)


def _random_rotation(rng: np.random.Generator, dims: int) -> np.ndarray:
    if dims == 2:
        theta = rng.uniform(0.0, 2.0 * np.pi)
        c, s = np.cos(theta), np.sin(theta)
        return np.array([[c, -s], [s, c]])
    q, r = np.linalg.qr(rng.standard_normal((dims, dims)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def _random_velocity(rng: np.random.Generator, dims: int, vmax: float) -> np.ndarray:
    direction = rng.standard_normal(dims)
    direction /= np.linalg.norm(direction)
    return rng.uniform(0.0, vmax) * direction


@dataclass
class SplitConfig:
    classes: tuple[int, ...] = (0, 9)
    train_count: int = 4096
    dev_count: int = 124
    spatial_dims: int = 2
    eval_velocity_max: float = 0.3
    seed: int = 0
    jitter: bool = True


def make_split(images: list[DigitImage],
               config: SplitConfig) -> tuple[list[SpacetimeCloud], list[SpacetimeCloud]]:
    """Rest-frame training clouds and randomly rotated/boosted dev clouds.

    Labels become indices into sorted(config.classes).  Image choice and all
    sampling derive from per-cloud seed sequences, so output is reproducible.
    """
    classes = sorted(config.classes)
    pool = [img for img in images if img.label in classes]
    present = {img.label for img in pool}
    missing = [c for c in classes if c not in present]
    if missing:
        raise DomainError(f"no source images for classes {missing}")

    def generate(count: int, split_id: int, transform: bool) -> list[SpacetimeCloud]:
        clouds = []
        for i in range(count):
            ss = np.random.SeedSequence((config.seed, split_id, i))
            rng = np.random.default_rng(ss)
            pick = int(rng.integers(len(pool)))
            img = pool[pick]
            cloud = sample_cloud(img, np.random.SeedSequence((config.seed, split_id, i, 1)),
                                 spatial_dims=config.spatial_dims, jitter=config.jitter)
            cloud.label = classes.index(img.label)
            cloud.meta.source_index = pick
            if transform:
                tf = PoincareTransform(
                    _random_velocity(rng, config.spatial_dims, config.eval_velocity_max),
                    _random_rotation(rng, config.spatial_dims))
                cloud = lorentz_boost(cloud, tf)
            clouds.append(cloud)
        return clouds

    return generate(config.train_count, 0, False), generate(config.dev_count, 1, True)


def synthetic_spread_split(train_count: int, dev_count: int, spatial_dims: int = 2,
                           seed: int = 0, spread: tuple[float, float] = (0.08, 0.25),
                           ) -> tuple[list[SpacetimeCloud], list[SpacetimeCloud]]:
    """Two-class task separable by an invariant: classes differ in spatial spread."""

    def generate(count: int, split_id: int) -> list[SpacetimeCloud]:
        clouds = []
        for i in range(count):
            rng = np.random.default_rng(np.random.SeedSequence((seed, 7, split_id, i)))
            label = i % 2
            times = rng.uniform(-TIME_HALF_WIDTH, TIME_HALF_WIDTH, size=NUM_POINTS)
            space = rng.normal(0.0, spread[label], size=(NUM_POINTS, spatial_dims))
            pts = np.column_stack([times, space])
            meta = CloudMeta(np.zeros(spatial_dims), np.eye(spatial_dims),
                             np.zeros(spatial_dims + 1))
            clouds.append(SpacetimeCloud(pts, label, meta))
        return clouds

    return generate(train_count, 0), generate(dev_count, 1)


def clouds_to_arrays(clouds: list[SpacetimeCloud]) -> tuple[np.ndarray, np.ndarray]:
    points = np.stack([c.points for c in clouds])
    labels = np.array([c.label for c in clouds], dtype=int)
    return points, labels


# ---------------------------------------------------------------------------
# Binary cloud files (.stc): little-endian, fixed layout documented below.
#
#   header: 4s magic "STC1" | u32 version | u32 cloud count | u32 points
#           | u32 spatial dims
#   per cloud: i32 label | f64 points [n_points * (1 + dims)] | f64 velocity
#           [dims] | f64 rotation [dims * dims] | f64 translation [1 + dims]
#           | i32 source index | i64 sample seed


def write_clouds(path: str, clouds: list[SpacetimeCloud]) -> None:
    if not clouds:
        raise DomainError("refusing to write an empty cloud file")
    dims = clouds[0].spatial_dims
    npts = clouds[0].points.shape[0]
    buf = io.BytesIO()
    buf.write(struct.pack("<4sIIII", STC_MAGIC, STC_VERSION, len(clouds), npts, dims))
    for cloud in clouds:
        if cloud.points.shape != (npts, dims + 1):
            raise DomainError("all clouds in one file must share shape")
        buf.write(struct.pack("<i", cloud.label))
        buf.write(cloud.points.astype("<f8").tobytes())
        buf.write(cloud.meta.velocity.astype("<f8").tobytes())
        buf.write(cloud.meta.rotation.astype("<f8").tobytes())
        buf.write(cloud.meta.translation.astype("<f8").tobytes())
        buf.write(struct.pack("<iq", cloud.meta.source_index, cloud.meta.sample_seed))
    with open(path, "wb") as fh:
        fh.write(buf.getvalue())


def read_clouds(path: str) -> list[SpacetimeCloud]:
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 20:
        raise FormatError(f"truncated cloud file: header needs 20 bytes, found {len(data)}")
    magic, version, count, npts, dims = struct.unpack_from("<4sIIII", data, 0)
    if magic != STC_MAGIC:
        raise FormatError(f"bad cloud-file magic at byte offset 0: {magic!r}")
    if version != STC_VERSION:
        raise FormatError(f"unsupported cloud-file version {version}")
    offset = 20
    record = 4 + 8 * (npts * (1 + dims) + dims + dims * dims + 1 + dims) + 4 + 8
    if len(data) < offset + count * record:
        raise FormatError(
            f"truncated cloud file: expected {offset + count * record} bytes, found {len(data)}")
    clouds = []
    for _ in range(count):
        label = struct.unpack_from("<i", data, offset)[0]
        offset += 4

        def take(n):
            nonlocal offset
            out = np.frombuffer(data, dtype="<f8", count=n, offset=offset).copy()
            offset += 8 * n
            return out

        pts = take(npts * (1 + dims)).reshape(npts, 1 + dims)
        velocity = take(dims)
        rotation = take(dims * dims).reshape(dims, dims)
        translation = take(1 + dims)
        source_index, sample_seed = struct.unpack_from("<iq", data, offset)
        offset += 12
        clouds.append(SpacetimeCloud(
            pts, label, CloudMeta(velocity, rotation, translation, source_index, sample_seed)))
    return clouds


def load_sklearn_digits() -> list[DigitImage]:
    """Offline stand-in for MNIST: scikit-learn's bundled 8x8 digits, upsampled to 28x28.

    Used when no IDX files are supplied; keeps the full pipeline runnable
    without downloads.
    """
    try:
        from sklearn.datasets import load_digits
    except ImportError as exc:  # pragma: no cover
        raise DomainError("scikit-learn unavailable and no IDX files supplied") from exc
    bunch = load_digits()
    images = []
    for pixels, label in zip(bunch.images, bunch.target):
        up = np.kron(pixels / 16.0, np.ones((4, 4)))  # 8x8 -> 32x32
        images.append(DigitImage(up[2:30, 2:30], int(label)))  # center-crop to 28x28
    return images
