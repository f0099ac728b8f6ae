"""
自定义异常类模块
定义应用程序特定的异常
"""


class SimplicialNormError(Exception):
    """SimplicialNormPro基础异常类"""
    pass


# ---- 复形 ----

class MulticomplexError(SimplicialNormError):
    """多重复形异常"""
    pass


class DanglingFaceError(MulticomplexError):
    """声明的面不存在"""
    pass


class AmbiguousFaceError(MulticomplexError):
    """平行单形导致面无法自动推断"""
    pass


class FaceIdentityViolation(MulticomplexError):
    """面映射不满足 d_i∘d_j = d_{j-1}∘d_i"""
    pass


class DuplicateDeclarationError(MulticomplexError):
    """重复声明"""
    pass


class IndexOutOfRangeError(MulticomplexError):
    """面索引或维数越界"""
    pass


class UnknownSimplexError(MulticomplexError):
    """单形不存在"""
    pass


class NotFaceClosedError(MulticomplexError):
    """子复形不是面封闭的"""
    pass


# ---- 链与上链 ----

class ChainError(SimplicialNormError):
    """链运算异常"""
    pass


class DimensionMismatchError(ChainError):
    """维数不匹配"""
    pass


class NotACycleError(ChainError):
    """不是（相对）闭链"""
    pass


class NotABoundaryError(ChainError):
    """不是边缘链"""
    pass


class NotACocycleError(ChainError):
    """不是（相对）上闭链"""
    pass


# ---- 群 ----

class GroupError(SimplicialNormError):
    """群运算异常"""
    pass


class InvalidElementError(GroupError):
    """群元素无效"""
    pass


class InfiniteGroupError(GroupError):
    """需要有限群"""
    pass


class InconclusiveError(GroupError):
    """上限耗尽导致无法判定（退出码 2）"""
    pass


class MembershipInconclusive(InconclusiveError):
    """子群成员判定达到上限"""
    pass


class OracleInconclusive(InconclusiveError):
    """字问题判定达到上限"""
    pass


class CapExceededError(InconclusiveError):
    """枚举被截断"""
    pass


# ---- 覆叠与收缩 ----

class CoverError(SimplicialNormError):
    """覆叠构造异常"""
    pass


class HypothesisViolation(CoverError):
    """粘合空间的前提条件不成立"""
    pass


class HolonomyOutsideFactors(CoverError):
    """边的和乐不在因子群内"""
    pass


class UniquenessViolation(CoverError):
    """找到多于一个中心单形"""
    pass


class ChoiceDependenceError(CoverError):
    """收缩结果依赖于路径选择"""
    pass


class DegreeTooLowError(CoverError):
    """上链次数过低"""
    pass


class RelativeViolation(CoverError):
    """相对条件不成立"""
    pass


# ---- 群作用 ----

class ActionError(SimplicialNormError):
    """群作用异常"""
    pass


class InvalidActionError(ActionError):
    """群作用不满足面交换或群律"""
    pass


class TargetSimplexMissing(ActionError):
    """变换后的一维骨架上没有单形"""
    pass


# ---- 粘合 ----

class GlueError(SimplicialNormError):
    """粘合构造异常"""
    pass


class InvalidGlueMap(GlueError):
    """粘合映射无效"""
    pass


class OverlappingSubcomplexes(GlueError):
    """自粘合的两个子复形相交"""
    pass


class NotTwoSidedError(GlueError):
    """切割子复形不是双侧的"""
    pass


class NotFillableError(GlueError):
    """边界无法在给定支撑内填充"""
    pass


# ---- 输入与配置 ----

class ConfigurationError(SimplicialNormError):
    """配置异常"""
    pass


class ParseError(SimplicialNormError):
    """输入文件语法错误"""

    def __init__(self, message: str, line: int = 0, column: int = 0, source: str = ''):
        self.line = line
        self.column = column
        self.source = source
        location = f"{source}:{line}:{column}" if source else f"{line}:{column}"
        super().__init__(f"{location}: {message}")


class UnresolvedReferenceError(ParseError):
    """引用了未声明的对象"""
    pass


class ValidationError(SimplicialNormError):
    """模块校验失败"""
    pass
