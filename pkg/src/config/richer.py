import pandas as pd
from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.align import Align


# 定義常數
PANEL_WIDTH = 100

console = Console(force_terminal=True, color_system="auto", width=PANEL_WIDTH)


def rich_print(message: str | Table,
               width: int = PANEL_WIDTH,
               title: str | None = None,
               style: str = "bold cyan"):
    """命令列訊息 (進度、完成或失敗) 一律以面板顯示

    Parameters
    ----------
    message : str | Table
        要顯示的訊息或表格
    width : int
        面板寬度
    title : str
        面板標題，可選
    style : str
        文字訊息的 rich 樣式，失敗訊息使用 "bold red"
    """
    content = Align.center(message if isinstance(message, Table) else f"[{style}]{message}[/{style}]")
    console.print(Panel(content, title=title, width=width, expand=True, border_style="bright_blue", padding=(0, 0)))


class DisplayManager:
    def __init__(self):
        self.console = console
        self.panel_width = PANEL_WIDTH
        self.panel_style = "bright_blue"
        self.panel_padding = (1, 0)

    def create_centered_panel(self, content, title, subtitle=None):
        """創建置中的面板"""
        centered_content = Align.center(content)
        return Panel(
            centered_content,
            title=title,
            width=self.panel_width,
            expand=True,
            border_style=self.panel_style,
            padding=self.panel_padding,
            subtitle=subtitle
        )

    def display_sweep(self, frame: pd.DataFrame, title: str):
        """顯示 Markov time 掃描結果 (t, num_communities, codelength)"""
        table = Table(title="Markov-time sweep")

        columns = [
            ("t", "right", "cyan"),
            ("Communities", "right", "magenta"),
            ("Codelength (bits)", "right", "green"),
        ]
        for name, justify, style in columns:
            table.add_column(name, justify=justify, style=style)

        for row in frame.itertuples(index=False):
            count = "failed" if row.num_communities < 0 else str(row.num_communities)
            table.add_row(f"{row.t:.4g}", count, f"{row.codelength:.6f}")

        self.console.print(self.create_centered_panel(table, title, f"{len(frame)} Markov times"))

    def display_partition(self, partition, codelength: float, title: str = "Partition"):
        """顯示分割的社群 (節點以 1 起算)"""
        table = Table(title=f"L = {codelength:.6f} bits", width=80, padding=(0, 1), expand=False)
        table.add_column("Community", justify="right", style="cyan")
        table.add_column("Nodes", style="green")

        for index, members in enumerate(partition.communities()):
            nodes = ', '.join(str(node + 1) for node in sorted(members))
            table.add_row(str(index + 1), nodes if len(nodes) < 60 else f"{nodes[:56]} ...")

        self.console.print(self.create_centered_panel(table, title, f"{partition.m} communities"))

    def display_identities(self, residuals: dict[str, float], tolerance: float):
        """顯示恆等式殘差與是否通過"""
        table = Table(title="Identity residuals", width=70, padding=(0, 1), expand=False)
        table.add_column("Identity", style="cyan")
        table.add_column("Residual", justify="right", style="green")
        table.add_column("Status", justify="center")

        for name, value in residuals.items():
            status = "[green]ok[/green]" if value <= tolerance else "[red]FAIL[/red]"
            table.add_row(name, f"{value:.3e}", status)

        self.console.print(self.create_centered_panel(table, "Absorption-inverse identities", f"tol = {tolerance:g}"))

    def display_stage_summary(self, summary: pd.DataFrame, every: int = 1):
        """顯示各階段的平均疫情統計"""
        table = Table(title="Outbreak statistics", width=80, padding=(0, 1), expand=False)
        columns = [
            ("Stage", "right", "cyan"),
            ("Mean duration", "right", "magenta"),
            ("Mean final size", "right", "green"),
            ("Mean peak", "right", "blue"),
        ]
        for name, justify, style in columns:
            table.add_column(name, justify=justify, style=style)

        for row in summary.iloc[::every].itertuples(index=False):
            table.add_row(str(row.stage), f"{row.mean_duration:.3f}", f"{row.mean_final_size:.2f}",
                          f"{row.mean_peak:.2f}")

        self.console.print(self.create_centered_panel(table, "SIR stages", f"n_sim = {summary['n_sim'].iloc[0]}"))
