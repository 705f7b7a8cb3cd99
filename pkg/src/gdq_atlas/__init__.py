"""
gdq_atlas - 广义差商余代数、全矩阵函数与全预解变换的定律检查工具箱

子包:
    - algebra: 非交换多项式、差商余代数、余表示级数、矩阵提升
    - matricial: 预解集、全矩阵集合/函数、矩阵差商、Choi 正性、U 变换
    - laws: 定律报告与可复现采样
    - pipeline: DuckDB 运行台账
    - cli: 场景驱动的命令行入口
"""

__version__ = "0.1.0"
