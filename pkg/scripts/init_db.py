import argparse

from gdq_atlas.config import DB_PATH
from gdq_atlas.pipeline.duckdb_store import get_table_info, init_db, list_tables


def parse_args():

    parser = argparse.ArgumentParser(description="初始化运行台账数据库")

    parser.add_argument("--db", default=str(DB_PATH), help="数据库路径")

    parser.add_argument("--describe", action="store_true", help="打印每张表的结构")

    return parser.parse_args()


def main():

    args = parse_args()

    init_db(args.db)

    print(f"数据库初始化完成: {args.db}")
    print("已创建表:")

    for table in list_tables(args.db):
        print(" -", table)
        if args.describe:
            print(get_table_info(table, args.db).to_string(index=False))


if __name__ == "__main__":

    main()
