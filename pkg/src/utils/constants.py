"""
应用程序常量定义
"""

# 应用程序信息
APP_NAME = "SimplicialNormPro"
VERSION = "1.0.0"
BUILD_DATE = "2026-10-01"
AUTHOR = "开发团队"

# 输入文件
SUPPORTED_INPUT_FORMATS = ['.mcx', '.txt']
MAX_INPUT_FILE_SIZE = 5 * 1024 * 1024  # 5MB
COMMENT_CHAR = '#'

# 默认上限（可通过命令行或配置档覆盖）
DEFAULT_MAX_WORD_LENGTH = 12
DEFAULT_MAX_COVER_RADIUS = 4
DEFAULT_MEMBERSHIP_CAP = 2000
DEFAULT_MAX_PATHS = 256
DEFAULT_WORKERS = 1

# 输出格式
OUTPUT_FORMATS = ['text', 'structured']
DEFAULT_OUTPUT_FORMAT = 'text'

# 退出码
EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2

# 命令
COMMANDS = [
    'check', 'norm', 'certificate', 'fill', 'epsnorm', 'nf', 'paths',
    'retract', 'transfer', 'glue', 'selfglue', 'double', 'cut', 'average',
]

# 报告状态
STATUS_PASS = 'PASS'
STATUS_FAIL = 'FAIL'
STATUS_OK = 'OK'
STATUS_INCONCLUSIVE = 'INCONCLUSIVE'

# LP 数值标注
LP_VALUE_LABEL = 'fixed-complex upper bound'

# 因子标签
TAG_K = 'K'
TAG_L = 'L'
TAG_T = 't'
TAG_A = 'A'

# 配置档
PROFILE_DIR_NAME = 'profiles'
DEFAULT_PROFILE_NAME = 'default'

# 日志配置
LOG_LEVEL = "INFO"
CLI_LOG_LEVEL = "WARNING"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_MAX_SIZE = 10 * 1024 * 1024  # 10MB
LOG_BACKUP_COUNT = 5
