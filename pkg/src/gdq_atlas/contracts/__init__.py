"""
gdq_atlas.contracts - 全项目唯一字段/规则来源（SSOT）

场景文件 → 定律检查 → 报告 → 台账 全都引用 contracts，
避免"字段改一次，改一堆模块"。

模块说明：
- fields.py: 场景/报告/台账字段名常量（SSOT）
- schema.py: 台账表结构（列清单 + 主键 + duckdb建表SQL）
- mappings.py: 定律名称 -> 陈述，套件 -> 定律清单
- conventions.py: 数值阈值、规模上限、矩阵 JSON 编码
- validate.py: 场景校验、报告表缺列检测
- errors.py: 领域异常层级
"""

from .fields import (
    FORMAT,
    SEED,
    CONTEXT,
    SITE,
    FUNCTIONAL,
    FUNCTIONS,
    SUITES,
    SAMPLER,
    TOLERANCES,
    Q,
    N_VARS,
    ORDER,
    DIM,
    BASIS,
    Y,
    FLAGS,
    IS_ALGEBRA,
    IS_STAR_CLOSED,
    Y_SELFADJOINT,
    WEIGHT,
    LABEL,
    KIND,
    LAWS,
    LAW,
    STATEMENT,
    SAMPLES,
    DEFECT,
    TOLERANCE,
    PASSED,
    WITNESS,
    DETAILS,
    TIMING,
    EXIT_CODE,
    RUN_ID,
    SUITE,
    SCENARIO,
    CREATED_AT,
    LAW_REPORT_FIELDS,
)

from .schema import (
    ColumnSpec,
    TableSchema,
    SCENARIO_RUN,
    LAW_REPORT,
    ALL_TABLES,
    TABLE_BY_NAME,
    get_table,
    init_database,
)

from .mappings import (
    LAW_STATEMENTS,
    SUITE_LAWS,
    base_law,
    get_statement,
    get_suite_laws,
)

from .conventions import (
    SCENARIO_FORMAT,
    REPORT_FORMAT,
    COEFF_EPS,
    KAPPA_MAX,
    SERIES_COND_MAX,
    SPECTRAL_TOL,
    CHOI_HERMITIAN_TOL,
    RANK_RTOL,
    EXACT_TOL,
    NUMERIC_TOL,
    LOOSE_TOL,
    POSITIVITY_TRIALS,
    MAX_SIZE,
    MAX_ORDER,
    MAX_SITE_DIM,
    SUITE_NAMES,
    SUITE_ALL,
    EXIT_OK,
    EXIT_LAW_FAILURE,
    EXIT_SCHEMA_ERROR,
    VALUE_SPACE_SCALAR,
    VALUE_SPACE_B,
    VALUE_SPACE_E,
    scaled,
    encode_complex,
    decode_complex,
    encode_matrix,
    decode_matrix,
    jsonable,
)

from .validate import (
    ValidationError,
    MissingFieldsError,
    FormatVersionError,
    CapExceededError,
    MatrixFormatError,
    UnknownNameError,
    MissingColumnsError,
    check_missing_columns,
    normalize_suites,
    quick_validate_scenario,
    validate_report_frame,
)

from .errors import (
    AtlasError,
    ContextMismatchError,
    VariableIndexError,
    DegreeError,
    SizeMismatchError,
    SeriesInversionError,
    SiteValidationError,
    SiteFlagError,
    NotInResolventSetError,
    DomainViolationError,
    SingularRuleError,
    ValueSpaceError,
    NonFullyMatricialError,
    NonHermitianChoiError,
)
