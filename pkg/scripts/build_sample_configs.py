"""Regenerate the small configuration files shipped in the package data directory."""

from pathlib import Path

from fourcolor.configlib import from_patch, serialize_config, validate

OUT = Path(__file__).resolve().parents[1] / "src" / "fourcolor" / "data" / "configs"


def wheel_patch(k: int) -> list[list[int]]:
    rotations = [list(range(1, k + 1))]
    for i in range(1, k + 1):
        rotations.append([0, (i - 2) % k + 1, -1, i % k + 1])
    return rotations


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    patches = {
        "deg3": ([[-1]], [3]),
        "deg4": ([[-1]], [4]),
        "deg5": ([[-1]], [5]),
        "birkhoff": ([[1, 2, 3, -1], [2, 0, -1], [3, 0, 1, -1], [0, 2, -1]], [5, 5, 5, 5]),
        "franklin": (wheel_patch(6), [6] * 7),
    }
    for name, (rotations, degrees) in patches.items():
        conf = from_patch(rotations, degrees, name)
        validate(conf)
        (OUT / f"{name}.conf").write_text(serialize_config(conf))
        print(name, conf.n_vertices, conf.ring_size)


if __name__ == "__main__":
    main()
