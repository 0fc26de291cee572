"""Command-line interface: ``osbf {smooth,compare,gen,spectrum,bench}``.

Exit codes: 0 success, 1 usage error, 2 I/O or parse error, 3 bench check failure.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
import time

import numpy as np

from . import synth
from .bench import BENCH_FILTERS, radius_ratios, run_bench, size_ratios
from .core import FilterConfig, ImagePlane, MultiChannelImage
from .filters2d import apply_filter, kernel_spectrum
from .filters3d import box_filter_3d, osbf_3d
from .io import (
    FormatError,
    parse_netpbm,
    parse_volume,
    write_csv,
    write_image,
    write_volume,
)
from .metrics import SSIM_WINDOW, psnr, rmse, ssim

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_CHECK = 0, 1, 2, 3

FILTER_VARIANTS = {
    "box": "box",
    "osbf": "osbf-exact",
    "fast-osbf": "osbf-fast",
    "os-gauss": "one-sided-generic",
    "gauss": "gaussian",
}
VOLUME_FILTERS = {"box": box_filter_3d, "osbf": osbf_3d}
GEN_KINDS = ("checkerboard", "step", "impulse", "noisy-checkerboard", "step-volume", "phantom")

# bench acceptance bounds
MAX_RADIUS_RATIO = 1.5
SIZE_RATIO_BOUNDS = (2.0, 8.0)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _read_bytes(path):
    with open(path, "rb") as fh:
        return fh.read()


def cmd_smooth(args):
    data = _read_bytes(args.inp)
    if data.startswith(b"VOL1"):
        if args.filter not in VOLUME_FILTERS:
            raise UsageError(f"filter {args.filter!r} is not available for volumes (use box or osbf)")
        vol = parse_volume(data)
        t0 = time.perf_counter()
        out = VOLUME_FILTERS[args.filter](vol, args.radius, args.iters)
        elapsed = time.perf_counter() - t0
        write_volume(out, args.out)
    else:
        img, maxval = parse_netpbm(data, return_maxval=True)
        config = FilterConfig(args.radius, args.iters, FILTER_VARIANTS[args.filter], sigma=args.sigma)
        t0 = time.perf_counter()
        out = MultiChannelImage([apply_filter(c, config, n_jobs=args.threads) for c in img.channels])
        elapsed = time.perf_counter() - t0
        bit_depth = args.bit_depth or (16 if maxval > 255 else 8)
        write_image(out, args.out, bit_depth=bit_depth)
    print(f"filter={args.filter} radius={args.radius} iters={args.iters} seconds={elapsed:.6f}")
    return EXIT_OK


def cmd_compare(args):
    a = parse_netpbm(_read_bytes(args.a))
    b = parse_netpbm(_read_bytes(args.b))
    if len(a) != len(b) or (a.width, a.height) != (b.width, b.height):
        print(
            f"error: images differ: {a.width}x{a.height}x{len(a)} vs {b.width}x{b.height}x{len(b)}",
            file=sys.stderr,
        )
        return EXIT_IO
    rows = []
    for i, (ca, cb) in enumerate(zip(a.channels, b.channels)):
        small = min(ca.width, ca.height) < SSIM_WINDOW
        s = math.nan if small else ssim(ca, cb, args.peak)
        rows.append((rmse(ca, cb), psnr(ca, cb, args.peak), s))
        print(f"channel={i} rmse={rows[-1][0]:.6g} psnr={rows[-1][1]:.6g} ssim={rows[-1][2]:.6g}")
    mean = [float(np.mean([r[k] for r in rows])) for k in range(3)]
    print(f"mean rmse={mean[0]:.6g} psnr={mean[1]:.6g} ssim={mean[2]:.6g}")
    return EXIT_OK


def cmd_gen(args):
    kind = args.kind
    w, h = args.width, args.height
    spec = synth.NoiseSpec(args.sigma, args.seed)
    if kind == "step-volume":
        edge = args.edge if args.edge is not None else w // 2
        vol = synth.step_volume(w, h, args.depth, edge, args.lo, args.hi, axis=args.axis)
        if args.sigma > 0:
            vol = synth.add_gaussian_noise(vol, spec)
        write_volume(vol, args.out)
        return EXIT_OK
    if kind == "checkerboard":
        plane = synth.checkerboard(w, h, args.cell, args.lo, args.hi)
    elif kind == "noisy-checkerboard":
        plane = synth.noisy_checkerboard(w, h, args.cell, args.lo, args.hi, spec)
    elif kind == "step":
        plane = synth.step(w, h, args.edge if args.edge is not None else w // 2, args.lo, args.hi)
    elif kind == "impulse":
        x = args.x if args.x is not None else w // 2
        y = args.y if args.y is not None else h // 2
        plane = synth.impulse(w, h, x, y, args.amplitude)
    else:
        plane = synth.phantom(w, h, args.seed)
    write_image(plane, args.out, bit_depth=args.bit_depth or 8)
    return EXIT_OK


def cmd_spectrum(args):
    os.makedirs(args.out_dir, exist_ok=True)
    for i in range(1, 9):
        spec = kernel_spectrum(i, args.radius, args.grid)
        path = os.path.join(args.out_dir, f"kernel{i}.pgm")
        write_image(ImagePlane.from_array(spec.to_array() * 255.0), path)
        print(path)
    return EXIT_OK


def cmd_bench(args):
    unknown = [f for f in args.filters if f not in BENCH_FILTERS]
    if unknown:
        raise UsageError(f"unknown bench filter(s) {unknown}; choose from {sorted(BENCH_FILTERS)}")

    def progress(rec):
        print(f"{rec.filter:10s} {rec.width}x{rec.height} r={rec.radius:<3d} {rec.seconds:.6f}s", flush=True)

    records = run_bench(
        args.filters, args.sizes, args.radii, args.iters, args.repeats, args.warmup, args.threads, progress
    )
    if args.out:
        write_csv(records, args.out)

    ok = True
    print("radius independence (max/min seconds across radii):")
    for (name, size), ratio in sorted(radius_ratios(records).items()):
        good = ratio <= MAX_RADIUS_RATIO
        ok &= good
        print(f"  {name:10s} {size}^2  ratio={ratio:.3f}  {'ok' if good else 'FAIL'}")
    print("pixel-count scaling (time ratio per size step):")
    lo, hi = SIZE_RATIO_BOUNDS
    for (name, r), steps in sorted(size_ratios(records).items()):
        for n_ratio, t_ratio in steps:
            # bounds are for quadrupling; scale them to the actual pixel-count step
            scale = n_ratio / 4.0
            good = lo * scale <= t_ratio <= hi * scale
            ok &= good
            print(f"  {name:10s} r={r:<3d} N x{n_ratio:.2f}: time x{t_ratio:.3f}  {'ok' if good else 'FAIL'}")
    by_key = {(rec.filter, rec.width, rec.radius): rec.seconds for rec in records}
    for (name, size, r), secs in sorted(by_key.items()):
        if name == "osbf" and ("box", size, r) in by_key:
            print(f"  osbf/box {size}^2 r={r}: {secs / by_key[('box', size, r)]:.2f}")
        if name == "fast-osbf" and ("osbf", size, r) in by_key:
            print(f"  fast-osbf/osbf {size}^2 r={r}: {secs / by_key[('osbf', size, r)]:.2f}")
    if args.check and not ok:
        print("bench check failed", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="osbf", description="One-sided box filter tools")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("smooth", help="filter a PGM/PPM image or VOL1 volume")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--filter", choices=sorted(FILTER_VARIANTS), default="osbf")
    p.add_argument("--radius", type=_positive_int, default=2)
    p.add_argument("--iters", type=int, default=10)
    p.add_argument("--sigma", type=float, default=3.0)
    p.add_argument("--bit-depth", type=int, choices=(8, 16))
    p.add_argument("--threads", type=_positive_int)
    p.set_defaults(func=cmd_smooth)

    p = sub.add_parser("compare", help="RMSE/PSNR/SSIM between two images")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--peak", type=float, default=255.0)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gen", help="write a synthetic test asset")
    p.add_argument("kind", choices=GEN_KINDS)
    p.add_argument("--out", required=True)
    p.add_argument("--width", type=_positive_int, default=256)
    p.add_argument("--height", type=_positive_int, default=256)
    p.add_argument("--depth", type=_positive_int, default=64)
    p.add_argument("--cell", type=_positive_int, default=32)
    p.add_argument("--edge", type=int)
    p.add_argument("--axis", choices=("x", "y", "z"), default="x")
    p.add_argument("--lo", type=float, default=0.0)
    p.add_argument("--hi", type=float, default=255.0)
    p.add_argument("--x", type=int)
    p.add_argument("--y", type=int)
    p.add_argument("--amplitude", type=float, default=255.0)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bit-depth", type=int, choices=(8, 16))
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("spectrum", help="spectra of the eight one-sided box kernels minus delta")
    p.add_argument("--radius", type=_positive_int, default=1)
    p.add_argument("--grid", type=_positive_int, default=64)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("bench", help="time filters across sizes and radii")
    p.add_argument("--filters", type=lambda s: [f for f in s.split(",") if f], default=["box", "osbf", "fast-osbf"])
    p.add_argument("--sizes", type=_int_list, default=[256, 512, 1024, 2048])
    p.add_argument("--radii", type=_int_list, default=[2, 8, 32])
    p.add_argument("--iters", type=_positive_int, default=1)
    p.add_argument("--repeats", type=_positive_int, default=5)
    p.add_argument("--warmup", type=_positive_int, default=1)
    p.add_argument("--threads", type=_positive_int)
    p.add_argument("--out")
    p.add_argument("--check", action="store_true", help="exit 3 unless the complexity ratios hold")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "gen" and args.sigma is None:
        args.sigma = synth.DEFAULT_NOISE_SIGMA if args.kind == "noisy-checkerboard" else 0.0
    if args.command == "smooth" and args.iters < 0:
        parser.error("--iters must be >= 0")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
