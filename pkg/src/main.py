import argparse
import logging
import os
from pathlib import Path
import sys
from typing import List, Optional

# srcディレクトリをsys.pathに追加して、lksパッケージをインポート可能にする
# Add the src directory to sys.path to allow importing the lks package
sys.path.append(str(Path(__file__).parent))

import numpy as np

from lks.config import ENV_PREFIX, get_settings
from lks.errors import LksError
from lks.extremal import tightness_witness
from lks.formats import dumps_report, read_graph, read_tree, tree_to_text, write_report
from lks.oracle import verify_embedding
from lks.ramsey import check_reduction, embedding_chain, ramsey_number, ramsey_table, star_table, table_records
from lks.routing import METHODS, embed_with
from lks.sweep import CLASSES, K_MODES, random_caterpillar_suite, verify_conjecture_sweep

# --- 終了コード / Exit codes ---
EXIT_FOUND = 0
EXIT_NOT_FOUND = 1
EXIT_INPUT_ERROR = 2

# n=7 のラベル付き全列挙は明示的なフラグが必要 / the n=7 labelled sweep needs an explicit flag
DEFAULT_SWEEP_LIMIT = 6

# フラグで上書きできる上限値 / caps that can be overridden per run
CAP_FLAGS = ("graph_enum_cap", "tree_enum_cap", "exact_path_cap", "coloring_cap", "max_rotations")


def apply_overrides(args: argparse.Namespace) -> None:
    """コマンドライン指定の上限値を環境変数経由で設定に反映する。
    Pushes cap flags into the LKS_* environment so worker processes see them too.
    """
    for name in CAP_FLAGS:
        value = getattr(args, name, None)
        if value is not None:
            os.environ[f"{ENV_PREFIX}{name.upper()}"] = str(value)
    get_settings.cache_clear()


def output_dir(args: argparse.Namespace) -> Path:
    return Path(args.output_dir) if args.output_dir else get_settings().output_dir


def run_embed(args: argparse.Namespace) -> int:
    """embed: ホストに木を埋め込む / Embed a tree into a host graph."""
    print(f"  [embed] Running {args.method} embedding with k={args.k}...")
    try:
        g = read_graph(args.host)
        t = read_tree(args.tree)
        rng = np.random.default_rng(args.seed)
        result = embed_with(g, args.k, t, args.method, rng=rng, keep_trace=args.trace)
    except LksError as e:
        print(f"  [embed] Failed: {e}")
        return EXIT_INPUT_ERROR
    payload = {"n": g.n, "tree": tree_to_text(t).splitlines(), "result": result.model_dump(mode="json")}
    if result.found:
        payload["verified"] = verify_embedding(g, t, dict(result.embedding or []))
    sys.stdout.write(dumps_report(payload))
    path = write_report(payload, output_dir(args) / "embed.json")
    print(f"  [embed] Completed with status {result.status.value}. Output: {path}")
    return EXIT_FOUND if result.found else EXIT_NOT_FOUND


def run_sweep(args: argparse.Namespace) -> int:
    """sweep: 小規模グラフの全列挙検証 / Exhaustive verification over small labelled hosts."""
    if args.n_max > DEFAULT_SWEEP_LIMIT and not args.n7:
        print(f"  [sweep] Failed: n-max above {DEFAULT_SWEEP_LIMIT} requires --n7")
        return EXIT_INPUT_ERROR
    print(f"  [sweep] Running sweep up to n={args.n_max} (class={args.tree_class}, k={args.k_mode}, jobs={args.jobs})...")
    try:
        report = verify_conjecture_sweep(args.n_max, args.tree_class, args.jobs, args.k_mode, progress=not args.quiet)
    except LksError as e:
        print(f"  [sweep] Failed: {e}")
        return EXIT_INPUT_ERROR
    payload = {"sweep": report.model_dump(mode="json")}
    clean = report.clean
    if args.caterpillars:
        suite = random_caterpillar_suite(args.caterpillars, seed=args.seed, progress=not args.quiet)
        payload["caterpillar_suite"] = suite.model_dump(mode="json")
        clean = clean and not suite.failures
    path = write_report(payload, output_dir(args) / f"sweep_n{args.n_max}_{args.tree_class}_{args.k_mode}.json")
    totals = report.totals
    print(f"  [sweep] {totals.hypothesis_instances} hypothesis instances, {len(report.violations)} violations, "
          f"{totals.conjecture_gaps} conjecture gaps")
    print(f"  [sweep] Completed. Output: {path}")
    return EXIT_FOUND if clean else EXIT_NOT_FOUND


def run_ramsey(args: argparse.Namespace) -> int:
    """ramsey: 木のラムゼー数 / Ramsey numbers of tree pairs."""
    code = EXIT_FOUND
    try:
        if args.t1 or args.t2:
            if not (args.t1 and args.t2):
                raise LksError("--t1 and --t2 must be given together")
            t1, t2 = read_tree(args.t1), read_tree(args.t2)
            print(f"  [ramsey] Running pair search for trees with {t1.size} and {t2.size} edges...")
            r = ramsey_number(t1, t2, args.jobs)
            payload = {"k": t1.size, "m": t2.size, "r": r, "bound": t1.size + t2.size,
                       "within_bound": r <= t1.size + t2.size}
            if args.chain:
                payload["chain"] = embedding_chain(t1, t2).model_dump(mode="json")
            print(f"  [ramsey] r = {r}, bound k + m = {t1.size + t2.size}")
            name = "ramsey_pair.json"
        elif args.reduction:
            n = args.n if args.n is not None else args.n_max
            mode = "exhaustive" if args.samples is None else f"{args.samples} sampled"
            print(f"  [ramsey] Checking the colour reduction on {mode} colourings of K_{n}...")
            report = check_reduction(n, args.samples, np.random.default_rng(args.seed))
            print(f"  [ramsey] {report.checks} checks, {len(report.violations)} violations")
            payload = {"reduction": report.model_dump(mode="json")}
            name = f"ramsey_reduction_n{n}.json"
            if report.violations:
                code = EXIT_NOT_FOUND
        elif args.stars:
            print(f"  [ramsey] Running star table up to k + m = {args.n_max}...")
            table = star_table(args.n_max, args.jobs)
            print(table.to_string(index=False))
            payload = {"stars": table_records(table)}
            name = f"ramsey_stars_{args.n_max}.json"
        else:
            print(f"  [ramsey] Running tree table up to k + m = {args.n_max}...")
            table = ramsey_table(args.n_max, args.jobs, progress=not args.quiet)
            print(table.to_string(index=False))
            payload = {"pairs": table_records(table)}
            name = f"ramsey_table_{args.n_max}.json"
    except LksError as e:
        print(f"  [ramsey] Failed: {e}")
        return EXIT_INPUT_ERROR
    path = write_report(payload, output_dir(args) / name)
    print(f"  [ramsey] Completed. Output: {path}")
    return code


def run_extremal(args: argparse.Namespace) -> int:
    """extremal: 閾値の最良性を示す構成 / Tightness construction and its witness report."""
    print(f"  [extremal] Running construction for k={args.k}, n={args.n}, pad={args.pad}...")
    try:
        report = tightness_witness(args.k, args.n, args.pad)
    except LksError as e:
        print(f"  [extremal] Failed: {e}")
        return EXIT_INPUT_ERROR
    print(report.graph6)
    payload = {**report.model_dump(mode="json"), "consistent": report.consistent}
    path = write_report(payload, output_dir(args) / f"extremal_k{args.k}_n{args.n}_pad{args.pad}.json")
    print(f"  [extremal] Completed. Output: {path}")
    return EXIT_FOUND if report.consistent else EXIT_NOT_FOUND


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="木埋め込み予想の構成的検証ツール。/ Constructive verification of tree embeddings under the n/2 degree hypothesis.")
    parser.add_argument("--debug", action="store_true", help="デバッグメッセージを有効にします。/ Enable debug messages.")
    parser.add_argument("--quiet", action="store_true", help="進捗バーを表示しません。/ Hide progress bars.")
    parser.add_argument("--output-dir", type=str, default=None, help="レポートの出力先。/ Report directory (default: LKS_OUTPUT_DIR).")
    parser.add_argument("--seed", type=int, default=0, help="乱数シード。/ Seed for every randomized step.")
    for name in CAP_FLAGS:
        parser.add_argument(f"--{name.replace('_', '-')}", dest=name, type=int, default=None,
                            help=f"{name} の上限を上書きします。/ Override the {name} setting.")
    sub = parser.add_subparsers(dest="command", required=True)

    embed = sub.add_parser("embed", help="木をホストに埋め込みます。/ Embed a tree into a host.")
    embed.add_argument("host", help="graph6 ファイルまたは文字列。/ graph6 file or inline string.")
    embed.add_argument("tree", help="木ファイル。/ Tree file ('tree <order>' header, then edges).")
    embed.add_argument("k", type=int, help="次数閾値。/ Degree threshold.")
    embed.add_argument("--method", choices=METHODS, default="auto")
    embed.add_argument("--trace", action="store_true", help="回転の記録を出力します。/ Keep rotation traces.")
    embed.set_defaults(func=run_embed)

    sweep = sub.add_parser("sweep", help="全列挙検証。/ Exhaustive sweep over labelled hosts.")
    sweep.add_argument("--n-max", type=int, default=4)
    sweep.add_argument("--class", dest="tree_class", choices=CLASSES, default="all")
    sweep.add_argument("--k-mode", choices=K_MODES, default="all")
    sweep.add_argument("--jobs", type=int, default=1)
    sweep.add_argument("--n7", action="store_true", help="n=7 の全列挙を許可します。/ Allow the n=7 sweep.")
    sweep.add_argument("--caterpillars", type=int, default=0,
                       help="ランダム毛虫スイートの件数。/ Size of the random caterpillar suite (0 skips it).")
    sweep.set_defaults(func=run_sweep)

    ramsey = sub.add_parser("ramsey", help="木のラムゼー数。/ Ramsey numbers of tree pairs.")
    ramsey.add_argument("--t1", type=str, default=None)
    ramsey.add_argument("--t2", type=str, default=None)
    ramsey.add_argument("--n-max", type=int, default=5, help="k + m の上限。/ Largest k + m in the tables.")
    ramsey.add_argument("--jobs", type=int, default=1)
    ramsey.add_argument("--stars", action="store_true", help="星の表を公式と比較します。/ Star table against the formula.")
    ramsey.add_argument("--chain", action="store_true",
                        help="全彩色で構成的埋め込みを確認します。/ Run the constructive chain over every colouring.")
    ramsey.add_argument("--reduction", action="store_true",
                        help="色の還元を全彩色または標本で検査します。/ Check the colour reduction on K_n.")
    ramsey.add_argument("--n", type=int, default=None, help="還元検査の頂点数。/ Order for --reduction (default: --n-max).")
    ramsey.add_argument("--samples", type=int, default=None,
                        help="ランダム彩色の数 (省略時は全列挙)。/ Random colourings instead of all of them.")
    ramsey.set_defaults(func=run_ramsey)

    extremal = sub.add_parser("extremal", help="極値構成。/ Tightness construction.")
    extremal.add_argument("--k", type=int, required=True)
    extremal.add_argument("--n", type=int, required=True)
    extremal.add_argument("--pad", type=int, default=0)
    extremal.set_defaults(func=run_extremal)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    コマンドライン引数に基づいて、指定されたサブコマンドを実行する。
    Runs the requested subcommand and returns its exit code.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.debug else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    apply_overrides(args)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
