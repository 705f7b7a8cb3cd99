"""
fields.py - 全项目字段名常量（SSOT）

场景文件(JSON)、报告文件(JSON)与 DuckDB 台账共用的字段名都在此定义。
修改字段名只需改这里，全项目自动生效。

使用示例:
    from gdq_atlas.contracts import SEED, SITE, DEFECT

    seed = scenario[SEED]
    d = scenario[SITE][DIM]

字段分类:
    - 场景顶层: FORMAT, SEED, CONTEXT, SITE, FUNCTIONAL, FUNCTIONS, SUITES, SAMPLER, TOLERANCES
    - 上下文: Q, N_VARS, ORDER
    - 站点: DIM, BASIS, Y, FLAGS, IS_ALGEBRA, IS_STAR_CLOSED, Y_SELFADJOINT
    - 函数声明: LABEL, KIND, RULE, COEFFS, NUMERATOR, DENOMINATOR, REGION, ...
    - 报告: LAWS, LAW, STATEMENT, SAMPLES, DEFECT, TOLERANCE, PASSED, WITNESS, DETAILS, TIMING
    - 台账: RUN_ID, SUITE, SCENARIO, CREATED_AT
"""

FORMAT = "format"
SEED = "seed"
CONTEXT = "context"
SITE = "site"
FUNCTIONAL = "functional"
FUNCTIONS = "functions"
SUITES = "suites"
SAMPLER = "sampler"
TOLERANCES = "tolerances"

Q = "q"
N_VARS = "n"
ORDER = "order"

DIM = "d"
BASIS = "basis"
Y = "y"
FLAGS = "flags"
IS_ALGEBRA = "algebra"
IS_STAR_CLOSED = "star_closed"
Y_SELFADJOINT = "y_selfadjoint"

WEIGHT = "weight"

LABEL = "label"
KIND = "kind"
RULE = "rule"
COEFFS = "coeffs"
NUMERATOR = "numerator"
DENOMINATOR = "denominator"
REGION = "region"
CENTER = "center"
RADIUS = "radius"
NORMAL = "normal"
OFFSET = "offset"
PARTS = "parts"
POLY = "poly"
TERMS = "terms"
WORD = "word"
COEFF = "coeff"
BLOCK = "block"

LAWS = "laws"
LAW = "law"
STATEMENT = "statement"
SAMPLES = "samples"
DEFECT = "defect"
TOLERANCE = "tolerance"
PASSED = "passed"
WITNESS = "witness"
DETAILS = "details"
TIMING = "timing"
EXIT_CODE = "exit_code"

RUN_ID = "run_id"
SUITE = "suite"
SCENARIO = "scenario"
CREATED_AT = "created_at"

SCENARIO_TOP_FIELDS = (FORMAT, SEED, CONTEXT, SITE, FUNCTIONAL, FUNCTIONS, SUITES, SAMPLER, TOLERANCES)

REQUIRED_SCENARIO_FIELDS = (FORMAT, SEED)

SITE_FIELDS = (DIM, BASIS, Y, FLAGS)

LAW_REPORT_FIELDS = (LAW, STATEMENT, SAMPLES, DEFECT, TOLERANCE, PASSED, WITNESS, DETAILS)
