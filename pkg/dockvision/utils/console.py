"""Human readable tables on the terminal - github.com/willmcgugan/rich."""
from typing import Any, Iterable

from rich.console import Console
from rich.table import Table


def print_table(
    column_names: list[str],
    rows: Iterable[Iterable[Any]],
    title: str | None = None,
    console: Console | None = None,
) -> Table:
    if console is None:
        console = Console()

    table = Table(title=title, show_header=True, header_style="bold red")
    for c in column_names:
        table.add_column(c)

    for row in rows:
        table.add_row(*[format_value(i) for i in row])

    console.print(table)
    return table


def format_value(value) -> str:
    if isinstance(value, float):
        return f'{value:.6g}'
    return str(value)
