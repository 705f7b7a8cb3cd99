"""
schema.py - 台账表结构

运行台账(DuckDB)只有两张表：scenario_run 记录一次运行，law_report 记录该次运行里每条定律的结果。
列名全部来自 fields.py；建表、按主键删除、插入的 SQL 都从这里生成，存储层不手写列清单。

使用示例:
    from gdq_atlas.contracts import LAW_REPORT, get_table, init_database

    schema = get_table("law_report")
    schema.required_columns()      # 不含带默认值的 created_at
    schema.delete_by_key_sql("tmp_df")

    import duckdb
    con = duckdb.connect("atlas.db")
    init_database(con)

表:
    - scenario_run: 主键 (run_id)
    - law_report:   主键 (run_id, suite, law)
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .fields import (
    RUN_ID, SCENARIO, SEED, SUITES, PASSED, FORMAT, CREATED_AT,
    SUITE, LAW, STATEMENT, SAMPLES, DEFECT, TOLERANCE, WITNESS,
)


@dataclass(frozen=True)
class ColumnSpec:
    """一列

    Attributes:
        name: 列名
        dtype: DuckDB 类型
        nullable: False 时加 NOT NULL
        default: 列默认值表达式；有默认值的列写入时可缺省
    """
    name: str
    dtype: str
    nullable: bool = True
    default: Optional[str] = None

    def ddl(self, inline_key: bool) -> str:
        parts = [self.name, self.dtype]
        if not self.nullable:
            parts.append("NOT NULL")
        if inline_key:
            parts.append("PRIMARY KEY")
        if self.default is not None:
            parts.append(f"DEFAULT {self.default}")
        return "  " + " ".join(parts)


@dataclass(frozen=True)
class TableSchema:
    """一张台账表

    Attributes:
        name: 表名
        columns: 列
        primary_key: 主键列；单列时写在列定义里，多列时写成表约束
    """
    name: str
    columns: Tuple[ColumnSpec, ...]
    primary_key: Tuple[str, ...]

    def column_names(self) -> Tuple[str, ...]:
        return tuple(col.name for col in self.columns)

    def required_columns(self) -> Tuple[str, ...]:
        """写入时必须给出的列（无默认值）"""
        return tuple(col.name for col in self.columns if col.default is None)

    def duckdb_create_sql(self) -> str:
        single = len(self.primary_key) == 1
        lines = [col.ddl(single and col.name in self.primary_key) for col in self.columns]
        if not single:
            lines.append(f"  PRIMARY KEY ({', '.join(self.primary_key)})")
        return f"CREATE TABLE IF NOT EXISTS {self.name} (\n" + ",\n".join(lines) + "\n);"

    def delete_by_key_sql(self, source: str) -> str:
        """删除主键出现在 source（已注册的视图）中的行"""
        key = ", ".join(self.primary_key)
        return f"DELETE FROM {self.name} WHERE ({key}) IN (SELECT {key} FROM {source})"

    def insert_sql(self, source: str, columns: Sequence[str]) -> str:
        """从 source 插入给定列

        Raises:
            ValueError: 含有表中不存在的列
        """
        unknown = [c for c in columns if c not in self.column_names()]
        if unknown:
            raise ValueError(f"[{self.name}] unknown columns: {unknown}")
        names = ", ".join(columns)
        return f"INSERT INTO {self.name} ({names}) SELECT {names} FROM {source}"


_CREATED_AT = ColumnSpec(CREATED_AT, "TIMESTAMP", default="CURRENT_TIMESTAMP")

SCENARIO_RUN = TableSchema(
    name="scenario_run",
    columns=(
        ColumnSpec(RUN_ID, "VARCHAR", nullable=False),
        ColumnSpec(SCENARIO, "VARCHAR"),
        ColumnSpec(SEED, "BIGINT"),
        ColumnSpec(SUITES, "VARCHAR"),
        ColumnSpec(PASSED, "BOOLEAN"),
        ColumnSpec(FORMAT, "VARCHAR"),
        _CREATED_AT,
    ),
    primary_key=(RUN_ID,),
)

LAW_REPORT = TableSchema(
    name="law_report",
    columns=(
        ColumnSpec(RUN_ID, "VARCHAR", nullable=False),
        ColumnSpec(SUITE, "VARCHAR", nullable=False),
        ColumnSpec(LAW, "VARCHAR", nullable=False),
        ColumnSpec(STATEMENT, "VARCHAR"),
        ColumnSpec(SAMPLES, "INTEGER"),
        ColumnSpec(DEFECT, "DOUBLE"),
        ColumnSpec(TOLERANCE, "DOUBLE"),
        ColumnSpec(PASSED, "BOOLEAN"),
        ColumnSpec(WITNESS, "VARCHAR"),
        _CREATED_AT,
    ),
    primary_key=(RUN_ID, SUITE, LAW),
)

ALL_TABLES = (SCENARIO_RUN, LAW_REPORT)

TABLE_BY_NAME = {table.name: table for table in ALL_TABLES}


def get_table(name: str) -> TableSchema:
    """按表名取结构

    Raises:
        ValueError: 未知表名
    """
    if name not in TABLE_BY_NAME:
        raise ValueError(f"Unknown table: {name}. Available: {sorted(TABLE_BY_NAME)}")
    return TABLE_BY_NAME[name]


def init_database(con) -> None:
    """在连接上建立全部台账表（已存在则跳过）"""
    for table in ALL_TABLES:
        con.execute(table.duckdb_create_sql())
