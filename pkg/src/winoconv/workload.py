"""Workload definitions: named sequences of convolution layers.

File format (line oriented, '#' comments and blank lines ignored):

    workload <name>
    layer <n> <h> <w> <c> <k> <r> <pad> <group>

h and w are output spatial dims.  Group labels must be contiguous.  The
builtin "vgg16d" holds the 13 convolutional layers of VGG-16 configuration D
(all 3x3 kernels, pad 1, batch 1) in five groups conv1..conv5.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .cost_model import LayerShape


@dataclass(frozen=True)
class WorkloadLayer:
    shape: LayerShape
    pad: int
    group: str

    def __post_init__(self):
        if self.pad < 0:
            raise ValueError(f"pad must be >= 0, got {self.pad}")
        if not self.group:
            raise ValueError("layer group label must be nonempty")


@dataclass(frozen=True)
class Workload:
    name: str
    layers: tuple[WorkloadLayer, ...]

    def __post_init__(self):
        if not self.name:
            raise ValueError("workload name must be nonempty")
        if not self.layers:
            raise ValueError("workload must contain at least one layer")
        seen: list[str] = []
        for layer in self.layers:
            if layer.group in seen and seen[-1] != layer.group:
                raise ValueError(f"group {layer.group!r} is not contiguous")
            if layer.group not in seen:
                seen.append(layer.group)

    @property
    def groups(self) -> tuple[str, ...]:
        out: list[str] = []
        for layer in self.layers:
            if not out or out[-1] != layer.group:
                out.append(layer.group)
        return tuple(out)

    def group_layers(self, group: str) -> tuple[WorkloadLayer, ...]:
        return tuple(l for l in self.layers if l.group == group)

    @property
    def shapes(self) -> tuple[LayerShape, ...]:
        return tuple(l.shape for l in self.layers)


def _vgg16d() -> Workload:
    # (h=w, c, k, group); all r=3, pad=1, n=1; h, w are output dims
    table = [
        (224, 3, 64, "conv1"), (224, 64, 64, "conv1"),
        (112, 64, 128, "conv2"), (112, 128, 128, "conv2"),
        (56, 128, 256, "conv3"), (56, 256, 256, "conv3"), (56, 256, 256, "conv3"),
        (28, 256, 512, "conv4"), (28, 512, 512, "conv4"), (28, 512, 512, "conv4"),
        (14, 512, 512, "conv5"), (14, 512, 512, "conv5"), (14, 512, 512, "conv5"),
    ]
    layers = tuple(
        WorkloadLayer(LayerShape(n=1, h=s, w=s, c=c, k=k, r=3), pad=1, group=g)
        for s, c, k, g in table
    )
    return Workload("vgg16d", layers)


BUILTIN_WORKLOADS = {"vgg16d": _vgg16d}


def parse_workload(text: str, source: str = "<string>") -> Workload:
    name: str | None = None
    layers: list[WorkloadLayer] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        kind = fields[0]
        if kind == "workload":
            if name is not None:
                raise ValueError(f"{source}:{lineno}: duplicate 'workload' record")
            if len(fields) != 2:
                raise ValueError(f"{source}:{lineno}: expected 'workload <name>'")
            name = fields[1]
        elif kind == "layer":
            if name is None:
                raise ValueError(f"{source}:{lineno}: 'layer' before 'workload' record")
            if len(fields) != 9:
                raise ValueError(
                    f"{source}:{lineno}: expected 'layer n h w c k r pad group', "
                    f"got {len(fields) - 1} fields"
                )
            try:
                n, h, w, c, k, r, pad = (int(x) for x in fields[1:8])
            except ValueError as exc:
                raise ValueError(f"{source}:{lineno}: non-integer layer field: {exc}") from None
            try:
                layers.append(
                    WorkloadLayer(LayerShape(n=n, h=h, w=w, c=c, k=k, r=r), pad=pad, group=fields[8])
                )
            except ValueError as exc:
                raise ValueError(f"{source}:{lineno}: {exc}") from None
        else:
            raise ValueError(f"{source}:{lineno}: unknown record type {kind!r}")
    if name is None:
        raise ValueError(f"{source}: missing 'workload <name>' record")
    try:
        return Workload(name, tuple(layers))
    except ValueError as exc:
        raise ValueError(f"{source}: {exc}") from None


def load_workload(name_or_path: str | Path) -> Workload:
    """Resolve a builtin workload name or parse a workload file."""
    key = str(name_or_path)
    if key in BUILTIN_WORKLOADS:
        return BUILTIN_WORKLOADS[key]()
    path = Path(name_or_path)
    if not path.exists():
        raise ValueError(
            f"unknown workload {key!r}: not a builtin "
            f"({', '.join(sorted(BUILTIN_WORKLOADS))}) and no such file"
        )
    return parse_workload(path.read_text(), source=str(path))


def format_workload(workload: Workload) -> str:
    lines = [f"workload {workload.name}", "# layer n h w c k r pad group"]
    for layer in workload.layers:
        s = layer.shape
        lines.append(
            f"layer {s.n} {s.h} {s.w} {s.c} {s.k} {s.r} {layer.pad} {layer.group}"
        )
    return "\n".join(lines) + "\n"


def save_workload(workload: Workload, path: str | Path):
    Path(path).write_text(format_workload(workload))
