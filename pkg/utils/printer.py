import shutil
import sys
from typing import Iterable

from colorama import Fore, Style
from tabulate import tabulate

# Terminal width detection
TERM_WIDTH = shutil.get_terminal_size((80, 20)).columns
MAX_WIDTH = min(78, TERM_WIDTH - 2)


def header(title: str) -> str:
    bar = "━" * MAX_WIDTH
    return f"{Fore.YELLOW}{bar}\n {title}\n{bar}{Style.RESET_ALL}"


def info(tag: str, message: str) -> None:
    print(f"{Fore.CYAN}[{tag}]{Style.RESET_ALL} {message}")


def error(message: str) -> None:
    print(f"{Fore.RED}[ERROR]{Style.RESET_ALL} {message}", file=sys.stderr)


def print_stats(stats, name: str) -> None:
    print(header(f"SeqSummaries – dataset '{name}'"))
    rows = [(k.replace("_", " "), v) for k, v in stats.summary().items()]
    print(tabulate(rows, tablefmt="simple"))
    print()


def _fraction(value) -> str:
    return "n/a" if value is None else f"{value:.2f}"


def print_score_report(report, unsupported: Iterable = ()) -> None:
    """
    Per-query tags plus aggregate fractions.
    """
    print(header("SeqSummaries – insight evaluation"))

    rows = []
    for q, v in report.verdicts:
        contains = f"{Fore.GREEN}yes{Style.RESET_ALL}" if v.contains_key_events else f"{Fore.RED}no{Style.RESET_ALL}"
        numbers = f"{Fore.GREEN}yes{Style.RESET_ALL}" if v.numbers_match else f"{Fore.RED}no{Style.RESET_ALL}"
        rows.append((
            " → ".join(q.events),
            q.expected_count,
            "-" if v.matched_count is None else v.matched_count,
            contains,
            numbers,
        ))
    if rows:
        print(tabulate(rows, headers=["events", "expected", "matched", "key events", "numbers"]))
        print()

    print(f"{Fore.CYAN}  Contains key events:{Style.RESET_ALL} {_fraction(report.contains_fraction)}")
    print(f"{Fore.CYAN}  Numbers match text:{Style.RESET_ALL}  {_fraction(report.numbers_fraction)}")

    unsupported = list(unsupported)
    if unsupported:
        print(f"{Fore.YELLOW}  Skipped {len(unsupported)} absence insight(s).{Style.RESET_ALL}")
    print()


def print_bench_records(records) -> None:
    rows = [
        (r.dataset, r.technique, f"{r.granularity:g}", f"{r.wall_time_ms:.1f}",
         r.peak_memory_bytes, r.nodes, r.edges, r.patterns, r.status)
        for r in records
    ]
    print(header("SeqSummaries – benchmark"))
    print(tabulate(
        rows,
        headers=["dataset", "technique", "level", "ms", "peak bytes", "nodes", "edges", "patterns", "status"],
    ))
    print()
