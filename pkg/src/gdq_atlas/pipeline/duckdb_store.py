"""DuckDB 存储层 - 运行台账持久化"""
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import duckdb
import pandas as pd

from ..config import DB_PATH, DB_READ_ONLY, ensure_dirs
from ..contracts import (
    LAW_REPORT,
    RUN_ID,
    SCENARIO_RUN,
    SUITE,
    init_database,
    validate_report_frame,
)

PathLike = Union[str, Path]


def get_connection(read_only: bool = False, db_path: Optional[PathLike] = None):
    """获取 DuckDB 连接

    Args:
        read_only: 是否只读模式（GDQ_DB_READ_ONLY=1 时强制只读）
        db_path: 数据库路径，默认 DB_PATH

    Returns:
        DuckDB 连接对象
    """
    if db_path is None:
        ensure_dirs()
        db_path = DB_PATH
    else:
        Path(db_path).parent.mkdir(parents=True, exist_ok=True)
    con = duckdb.connect(str(db_path), read_only=read_only or DB_READ_ONLY)
    return con


def init_db(db_path: Optional[PathLike] = None):
    """初始化数据库，创建所有表"""
    con = get_connection(db_path=db_path)
    try:
        init_database(con)
    finally:
        con.close()


def save_run(run_row: Dict[str, Any], db_path: Optional[PathLike] = None) -> None:
    """保存一次场景运行（同 run_id 覆盖）

    Args:
        run_row: scenario_run 表的一行（created_at 可缺省）
    """
    columns = [c for c in SCENARIO_RUN.column_names() if c in run_row]
    df = pd.DataFrame([{c: run_row[c] for c in columns}], columns=columns)
    con = get_connection(db_path=db_path)
    try:
        init_database(con)
        con.register("tmp_df", df)
        con.execute(SCENARIO_RUN.delete_by_key_sql("tmp_df"))
        con.execute(SCENARIO_RUN.insert_sql("tmp_df", columns))
    finally:
        con.close()


def save_law_reports(df: pd.DataFrame, replace: bool = False, db_path: Optional[PathLike] = None) -> None:
    """保存定律检查结果

    Args:
        df: reports_to_frame 的输出，附带 run_id 列
        replace: 是否替换现有数据（按主键）
    """
    df = validate_report_frame(df)
    columns = list(df.columns)
    con = get_connection(db_path=db_path)
    try:
        init_database(con)
        con.register("tmp_df", df)
        if replace:
            con.execute(LAW_REPORT.delete_by_key_sql("tmp_df"))
        con.execute(LAW_REPORT.insert_sql("tmp_df", columns))
    finally:
        con.close()


def get_law_reports(
    run_id: Optional[str] = None,
    suite: Optional[str] = None,
    failed_only: bool = False,
    db_path: Optional[PathLike] = None,
) -> pd.DataFrame:
    """获取定律检查结果

    Args:
        run_id: 运行 ID
        suite: 套件名
        failed_only: 只返回未通过的定律

    Returns:
        定律报告 DataFrame
    """
    con = get_connection(read_only=True, db_path=db_path)
    try:
        query = f"SELECT * FROM {LAW_REPORT.name} WHERE 1=1"
        params = []

        if run_id:
            query += f" AND {RUN_ID} = ?"
            params.append(run_id)
        if suite:
            query += f" AND {SUITE} = ?"
            params.append(suite)
        if failed_only:
            query += " AND NOT passed"

        query += f" ORDER BY {RUN_ID}, {SUITE}, law"
        return con.execute(query, params).fetchdf()
    finally:
        con.close()


def list_runs(db_path: Optional[PathLike] = None) -> pd.DataFrame:
    """列出所有运行，按创建时间排序"""
    con = get_connection(read_only=True, db_path=db_path)
    try:
        return con.execute(f"SELECT * FROM {SCENARIO_RUN.name} ORDER BY created_at, {RUN_ID}").fetchdf()
    finally:
        con.close()


def list_tables(db_path: Optional[PathLike] = None) -> List[str]:
    """列出所有表"""
    con = get_connection(read_only=True, db_path=db_path)
    try:
        tables = con.execute("SHOW TABLES").fetchall()
        return [t[0] for t in tables]
    finally:
        con.close()


def get_table_info(table_name: str, db_path: Optional[PathLike] = None) -> pd.DataFrame:
    """获取表结构信息"""
    con = get_connection(read_only=True, db_path=db_path)
    try:
        return con.execute(f"DESCRIBE {table_name}").fetchdf()
    finally:
        con.close()
