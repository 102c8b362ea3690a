"""``lumen`` command line: enhance-gray, enhance-color, metrics, sweep.

Exit codes: 0 success, 2 I/O or file-format error, 3 bad parameters.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Optional, Sequence

from . import metrics, weber
from .dct import EnhanceMode, MappingFunction, enhance_color
from .errors import FormatError, LumenError, ParameterError
from .pixelbuf import GrayImage, RgbImage, load, rgb_to_ycbcr, to_uint8, write_pnm

EXIT_OK = 0
EXIT_IO = 2
EXIT_PARAM = 3

GRAY_METRICS = ("ssim", "normalized_entropy")
COLOR_METRICS = ("jpqm", "cef")


class UsageError(ParameterError):
    code = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def format_value(x: float, digits: int = 6) -> str:
    """Six significant digits, ties rounded away from zero, trailing zeros kept."""
    d = Decimal(repr(float(x)))
    if d == 0:
        return "0." + "0" * (digits - 1)
    exp = d.adjusted()
    q = d.quantize(Decimal(1).scaleb(exp - digits + 1), rounding=ROUND_HALF_UP)
    if q.adjusted() != exp:  # rounding carried into a new digit, e.g. 9.999995
        exp = q.adjusted()
        q = d.quantize(Decimal(1).scaleb(exp - digits + 1), rounding=ROUND_HALF_UP)
    if -5 <= exp < digits:
        return f"{q:f}"
    mantissa = q.scaleb(-exp)
    return f"{mantissa:f}e{exp:+03d}"


def format_cell(report: metrics.MetricsReport, name: str) -> str:
    if name in report.errors:
        return f"ERROR:{report.errors[name]}"
    value = getattr(report, name)
    return "" if value is None else format_value(value)


def luminance(img) -> GrayImage:
    """Gray images pass through; colour images give their rounded JFIF luma."""
    if isinstance(img, GrayImage):
        return img
    return GrayImage(to_uint8(rgb_to_ycbcr(img).y))


def atomic_write(path, payload: bytes) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class _IOFailure(Exception):
    pass


def _read(path, kind=None):
    try:
        img = load(path)
    except OSError as exc:
        raise _IOFailure(f"cannot read {path}: {exc.strerror or exc}") from exc
    except FormatError as exc:
        raise _IOFailure(f"{path}: {exc}") from exc
    if kind is not None and not isinstance(img, kind):
        want = "P5 (grayscale)" if kind is GrayImage else "P6 (colour)"
        raise _IOFailure(f"{path}: expected a {want} image")
    return img


def parse_block(text: str) -> tuple[int, int]:
    w, sep, h = text.lower().partition("x")
    try:
        size = (int(w), int(h)) if sep else (int(w), int(w))
    except ValueError:
        raise ParameterError(f"bad block size {text!r}; expected WxH, e.g. 16x16") from None
    if min(size) < 1:
        raise ParameterError(f"block sides must be positive, got {text!r}")
    return size


def parse_list(text: Optional[str], convert=str, what="value") -> list:
    if text is None:
        return []
    items = [t.strip() for t in text.split(",") if t.strip()]
    try:
        return [convert(t) for t in items]
    except ValueError:
        raise ParameterError(f"bad {what} list {text!r}") from None


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise ValueError(text)
    return value


def _gray_param(args) -> object:
    if args.method == "blocks":
        if not args.block:
            raise ParameterError("--method blocks needs --block WxH")
        return parse_block(args.block)
    if args.mu is None:
        raise ParameterError(f"--method {args.method} needs --mu")
    if args.mu < 1:
        raise ParameterError("--mu must be at least 1")
    return args.mu


def cmd_enhance_gray(args, out) -> int:
    param = _gray_param(args)
    f = _read(args.input, GrayImage)
    if args.method == "blocks":
        l1, l2 = param
        if l1 > f.width or l2 > f.height:
            raise ParameterError(f"block {l1}x{l2} exceeds image {f.width}x{f.height}")
    result, background = weber.enhance(f, args.method, param)
    atomic_write(args.output, write_pnm(result))
    if args.emit_background:
        atomic_write(args.emit_background, write_pnm(background.to_image()))
    report = weber.score_against(f, result)
    for name in GRAY_METRICS:
        print(f"{name},{format_cell(report, name)}", file=out)
    return EXIT_OK


def _color_report(original: RgbImage, result: RgbImage) -> metrics.MetricsReport:
    report = metrics.MetricsReport()
    metrics.measure(report, "jpqm", lambda: metrics.jpqm(luminance(result)))
    metrics.measure(report, "cef", lambda: metrics.cef(original, result))
    return report


def cmd_enhance_color(args, out) -> int:
    fn = MappingFunction.parse(args.map)
    mode = _parse_mode(args.mode)
    img = _read(args.input, RgbImage)
    result = enhance_color(img, fn, mode)
    atomic_write(args.output, write_pnm(result))
    report = _color_report(img, result)
    for name in COLOR_METRICS:
        print(f"{name},{format_cell(report, name)}", file=out)
    return EXIT_OK


def _parse_mode(text: str) -> EnhanceMode:
    try:
        return EnhanceMode(text.strip().lower())
    except ValueError:
        raise ParameterError(f"unknown mode {text!r}; expected dc, dc-ac or dc-ac-chroma") from None


class _NeedsColor(LumenError):
    code = "needs-color"


class _NeedsSecond(LumenError):
    code = "needs-two-images"


def _as_color(img) -> RgbImage:
    if not isinstance(img, RgbImage):
        raise _NeedsColor("metric needs a P6 colour image")
    return img


# name -> (needs two images, function of (first, second))
METRIC_TABLE = {
    "ssim": (True, lambda a, b: metrics.ssim(luminance(a), luminance(b))),
    "entropy": (False, lambda a, b: metrics.entropy(luminance(a))),
    "normalized_entropy": (True, lambda a, b: metrics.normalized_entropy(luminance(a), luminance(b))),
    "weber": (False, lambda a, b: metrics.weber_contrast(luminance(a))),
    "jpqm": (False, lambda a, b: metrics.jpqm(luminance(a))),
    "colorfulness": (False, lambda a, b: metrics.colorfulness(_as_color(a))),
    "cef": (True, lambda a, b: metrics.cef(_as_color(a), _as_color(b))),
}


def cmd_metrics(args, out) -> int:
    wanted = [name for name in METRIC_TABLE if getattr(args, name)]
    if not wanted:
        raise ParameterError("choose at least one metric, e.g. --ssim or --entropy")
    if len(args.images) > 2:
        raise ParameterError("metrics takes one or two images")
    images = [_read(p) for p in args.images]
    first = images[0]
    second = images[1] if len(images) > 1 else None
    for name in wanted:
        pair, fn = METRIC_TABLE[name]
        try:
            if pair and second is None:
                raise _NeedsSecond(f"{name} compares two images")
            if pair and type(first) is not type(second):
                raise ParameterError("images must both be P5 or both be P6")
            cell = format_value(fn(first, second))
        except LumenError as exc:
            cell = f"ERROR:{exc.code}"
        print(f"{name},{cell}", file=out)
    return EXIT_OK


def render_table(header: Sequence[str], rows: Sequence[Sequence[str]], fmt: str) -> str:
    if fmt == "markdown":
        lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
        lines += ["| " + " | ".join(r) + " |" for r in rows]
    else:
        lines = [",".join(header)] + [",".join(r) for r in rows]
    return "\n".join(lines) + "\n"


def _emit_table(args, text: str, out) -> None:
    if args.table:
        atomic_write(args.table, text.encode())
    else:
        out.write(text)


def _sweep_gray(args, out) -> int:
    methods = parse_list(args.methods, what="method") or ["reconstruction"]
    for m in methods:
        if m not in weber.METHODS:
            raise ParameterError(f"unknown method {m!r}; expected {', '.join(weber.METHODS)}")
    mus = parse_list(args.mu, _positive_int, "mu")
    blocks = [parse_block(b) for b in parse_list(args.block, what="block")]
    cells = []
    for m in methods:
        params = blocks if m == "blocks" else mus
        if not params:
            raise ParameterError(f"method {m} needs a nonempty {'--block' if m == 'blocks' else '--mu'} list")
        cells += [(m, p) for p in params]

    f = _read(args.input, GrayImage)
    out_dir = Path(args.out_dir) if args.out_dir else Path(args.input).parent
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.input).stem
    rows, ok = [], 0
    for method, p in cells:
        label = f"{method}:{p[0]}x{p[1]}" if method == "blocks" else f"{method}:mu={p}"
        try:
            (entry,) = weber.enhance_sweep(f, method, [p])
        except LumenError as exc:
            rows.append([label] + [f"ERROR:{exc.code}"] * len(GRAY_METRICS))
            continue
        suffix = f"{p[0]}x{p[1]}" if method == "blocks" else f"mu{p}"
        atomic_write(out_dir / f"{stem}_{method}_{suffix}.pgm", write_pnm(entry.image))
        rows.append([label] + [format_cell(entry.report, n) for n in GRAY_METRICS])
        ok += 1
    _emit_table(args, render_table(["param", *GRAY_METRICS], rows, args.format), out)
    return EXIT_OK if ok else EXIT_PARAM


def _sweep_color(args, out) -> int:
    maps = [MappingFunction.parse(m) for m in parse_list(args.maps, what="mapping")] or [
        MappingFunction.parse(m) for m in ("twisting", "eta", "s")
    ]
    modes = [_parse_mode(m) for m in parse_list(args.modes, what="mode")] or list(EnhanceMode)
    img = _read(args.input, RgbImage)
    out_dir = Path(args.out_dir) if args.out_dir else Path(args.input).parent
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.input).stem
    header = ["param"] + [f"{mode.value}:{name}" for mode in modes for name in COLOR_METRICS]
    rows, ok = [], 0
    for fn in maps:
        row = [fn.label]
        for mode in modes:
            try:
                result = enhance_color(img, fn, mode)
            except LumenError as exc:
                row += [f"ERROR:{exc.code}"] * len(COLOR_METRICS)
                continue
            name = f"{stem}_{fn.label.replace(':', '-')}_{mode.value}.ppm"
            atomic_write(out_dir / name, write_pnm(result))
            report = _color_report(img, result)
            row += [format_cell(report, n) for n in COLOR_METRICS]
            ok += 1
        rows.append(row)
    _emit_table(args, render_table(header, rows, args.format), out)
    return EXIT_OK if ok else EXIT_PARAM


def cmd_sweep(args, out) -> int:
    if args.kind == "gray":
        return _sweep_gray(args, out)
    return _sweep_color(args, out)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lumen", description="Low-light image enhancement and quality metrics.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("enhance-gray", help="Weber-law enhancement of a P5 image")
    g.add_argument("--method", choices=weber.METHODS, default="reconstruction")
    g.add_argument("--mu", type=int, help="structuring element scale (eroded, reconstruction)")
    g.add_argument("--block", help="block size WxH (blocks method)")
    g.add_argument("--emit-background", metavar="PATH", help="also write the background estimate as P5")
    g.add_argument("input")
    g.add_argument("output")
    g.set_defaults(func=cmd_enhance_gray)

    c = sub.add_parser("enhance-color", help="block-DCT enhancement of a P6 image")
    c.add_argument("--map", default="twisting", help="twisting | eta[:exponent] | s")
    c.add_argument("--mode", default="dc-ac", help="dc | dc-ac | dc-ac-chroma")
    c.add_argument("input")
    c.add_argument("output")
    c.set_defaults(func=cmd_enhance_color)

    m = sub.add_parser("metrics", help="print quality metrics as name,value rows")
    for name in METRIC_TABLE:
        m.add_argument("--" + name.replace("_", "-"), dest=name, action="store_true")
    m.add_argument("images", nargs="+", metavar="IMAGE")
    m.set_defaults(func=cmd_metrics)

    s = sub.add_parser("sweep", help="run a parameter grid and tabulate metrics")
    s.add_argument("kind", choices=("gray", "color"))
    s.add_argument("--methods", help="gray: comma list of blocks,eroded,reconstruction")
    s.add_argument("--mu", help="gray: comma list of scales")
    s.add_argument("--block", help="gray: comma list of WxH block sizes")
    s.add_argument("--maps", help="color: comma list of mappings")
    s.add_argument("--modes", help="color: comma list of modes")
    s.add_argument("--out-dir", help="directory for per-cell images (default: next to input)")
    s.add_argument("--table", help="write the table here instead of standard output")
    s.add_argument("--format", choices=("csv", "markdown"), default="csv")
    s.add_argument("input")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except _IOFailure as exc:
        print(f"lumen: {exc}", file=err)
        return EXIT_IO
    except OSError as exc:
        print(f"lumen: {exc}", file=err)
        return EXIT_IO
    except LumenError as exc:
        print(f"lumen: {exc}", file=err)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
