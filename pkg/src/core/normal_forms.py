"""
正规形模块
融合自由积与 HNN 扩张中的正规形约化、规范化、等价判定，
以及以规范正规形为元素的群运算
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .groups import GroupOracle, Subgroup
from ..utils.logger import get_logger
from ..utils.constants import TAG_K, TAG_L, TAG_T
from ..utils.exceptions import GroupError, InvalidElementError

Syllable = Tuple[str, Any]

AMALGAM = 'amalgam'
HNN = 'hnn'

_TAG_RANK = {TAG_K: 0, TAG_L: 1, TAG_T: 2}


@dataclass(frozen=True)
class NormalForm:
    """正规形：带因子标签的音节序列"""
    syllables: Tuple[Syllable, ...]
    context: str

    def __len__(self) -> int:
        return len(self.syllables)

    @property
    def is_identity(self) -> bool:
        return not self.syllables

    @property
    def tags(self) -> Tuple[str, ...]:
        return tuple(tag for tag, _ in self.syllables)

    def stable_letters(self) -> Tuple[int, ...]:
        return tuple(e for tag, e in self.syllables if tag == TAG_T)


class GroupDatum(ABC):
    """
    融合积 / HNN 扩张数据的公共接口

    群元素一律用规范正规形表示，因此可以直接比较与作字典键。
    """

    context = ''

    def __init__(self, name: str):
        self.name = name
        self.logger = get_logger(__name__)
        self._products: Dict[Tuple[NormalForm, NormalForm], NormalForm] = {}

    @abstractmethod
    def factor(self, tag: str) -> GroupOracle:
        pass

    @abstractmethod
    def reduce(self, word: Sequence[Syllable]) -> NormalForm:
        pass

    @abstractmethod
    def canonical(self, nf: NormalForm) -> NormalForm:
        pass

    @abstractmethod
    def check_invariants(self, nf: NormalForm) -> bool:
        pass

    @abstractmethod
    def in_edge_group(self, element: NormalForm) -> bool:
        """元素是否落在边群中（融合子群，或 HNN 的 A1∪A2）"""
        pass

    @abstractmethod
    def factor_element(self, element: NormalForm, tag: str) -> Optional[Any]:
        """元素属于某个顶点群时返回该群中的元素，否则 None"""
        pass

    # ---- 以规范正规形为元素的群运算 ----

    def identity(self) -> NormalForm:
        return NormalForm((), self.context)

    def is_identity(self, a: NormalForm) -> bool:
        return a.is_identity

    def element(self, word: Sequence[Syllable]) -> NormalForm:
        return self.canonical(self.reduce(word))

    def multiply(self, a: NormalForm, b: NormalForm) -> NormalForm:
        key = (a, b)
        if key not in self._products:
            self._products[key] = self.element(a.syllables + b.syllables)
        return self._products[key]

    def invert(self, a: NormalForm) -> NormalForm:
        return self.element([self._invert_syllable(s) for s in reversed(a.syllables)])

    def _invert_syllable(self, syllable: Syllable) -> Syllable:
        tag, value = syllable
        if tag == TAG_T:
            return (TAG_T, -value)
        return (tag, self.factor(tag).invert(value))

    def sort_key(self, a: NormalForm) -> Tuple:
        return (len(a), tuple(
            (_TAG_RANK[tag], (value,) if tag == TAG_T else self.factor(tag).sort_key(value))
            for tag, value in a.syllables
        ))

    def word_length(self, a: NormalForm) -> int:
        return sum(1 if tag == TAG_T else self.factor(tag).word_length(value)
                   for tag, value in a.syllables)

    def syllable_length(self, a: NormalForm) -> int:
        """正规形长度：融合积为音节数，HNN 为稳定字母数"""
        if self.context == HNN:
            return len(a.stable_letters())
        return len(a)

    def nf_equivalent(self, n1: NormalForm, n2: NormalForm) -> bool:
        return nf_equivalent(n1, n2, self)

    # ---- 文本 ----

    def parse_syllable(self, token: str) -> Syllable:
        token = token.strip()
        if token == 't':
            return (TAG_T, 1)
        if token == 'T':
            return (TAG_T, -1)
        if ':' not in token:
            raise InvalidElementError(f"音节必须写成 K:<元素>、L:<元素>、t 或 T: {token}")
        tag, text = token.split(':', 1)
        if tag not in self.tags():
            raise InvalidElementError(f"{self.name} 中没有因子 {tag}")
        return (tag, self.factor(tag).parse_element(text))

    def parse_word(self, tokens: Sequence[str]) -> List[Syllable]:
        return [self.parse_syllable(t) for t in tokens if t.strip() not in ('', '1')]

    def parse_element(self, text: str) -> NormalForm:
        return self.element(self.parse_word(text.replace('·', ' ').split()))

    def format_syllable(self, syllable: Syllable) -> str:
        tag, value = syllable
        if tag == TAG_T:
            return 't' if value > 0 else 'T'
        return f"{tag}:{self.factor(tag).format_element(value)}"

    def format_element(self, a: NormalForm) -> str:
        if a.is_identity:
            return '1'
        return ' '.join(self.format_syllable(s) for s in a.syllables)

    def tags(self) -> Tuple[str, ...]:
        return (TAG_K, TAG_L)

    def _member(self, sub: Subgroup, value: Any) -> bool:
        return sub.is_member(value)


class AmalgamDatum(GroupDatum):
    """
    融合自由积 GK *_GA GL

    GA 的第 i 个生成元在 GK 中的像为 sub_k 的第 i 个生成元，在 GL 中为 sub_l 的第 i 个。
    """

    context = AMALGAM

    def __init__(self, name: str, sub_k: Subgroup, sub_l: Subgroup):
        super().__init__(name)
        if len(sub_k.generators) != len(sub_l.generators):
            raise GroupError(f"融合积 {name} 两侧嵌入的生成元数目不同")
        self.gk = sub_k.group
        self.gl = sub_l.group
        self.sub_k = sub_k
        self.sub_l = sub_l
        self._spot_check_embeddings()
        self.logger.debug(f"融合积 {name} 构建完成: {self.gk.name} *_{{{sub_k.name}}} {self.gl.name}")

    def _spot_check_embeddings(self):
        """按生成元的阶抽查两侧嵌入是否一致"""
        for i, (x, y) in enumerate(zip(self.sub_k.generators, self.sub_l.generators)):
            if self.gk.element_order(x, self.sub_k.cap) != self.gl.element_order(y, self.sub_l.cap):
                raise GroupError(
                    f"融合积 {self.name} 的第 {i} 个生成元在两侧的阶不同: "
                    f"{self.gk.format_element(x)} / {self.gl.format_element(y)}"
                )

    def factor(self, tag: str) -> GroupOracle:
        if tag == TAG_K:
            return self.gk
        if tag == TAG_L:
            return self.gl
        raise InvalidElementError(f"融合积中没有因子 {tag}")

    def edge_subgroup(self, tag: str) -> Subgroup:
        return self.sub_k if tag == TAG_K else self.sub_l

    @staticmethod
    def other(tag: str) -> str:
        return TAG_L if tag == TAG_K else TAG_K

    def in_amalgamated(self, tag: str, value: Any) -> bool:
        return self._member(self.edge_subgroup(tag), value)

    def transfer(self, tag: str, value: Any) -> Any:
        """把融合子群中的元素从一侧搬到另一侧"""
        word = self.edge_subgroup(tag).express(value)
        target = self.other(tag)
        return self.factor(target).evaluate(word, self.edge_subgroup(target).generators)

    def reduce(self, word: Sequence[Syllable]) -> NormalForm:
        return amalgam_nf(word, self)

    def canonical(self, nf: NormalForm) -> NormalForm:
        """从左到右选取 GA-左陪集代表元，余项并入下一个音节"""
        syllables = list(self.reduce(nf.syllables).syllables)
        if not syllables:
            return self.identity()
        if len(syllables) == 1:
            tag, value = syllables[0]
            if tag == TAG_L and self.in_amalgamated(TAG_L, value):
                return NormalForm(((TAG_K, self.transfer(TAG_L, value)),), AMALGAM)
            return NormalForm((syllables[0],), AMALGAM)

        result: List[Syllable] = []
        carry: Optional[Any] = None
        for i, (tag, value) in enumerate(syllables):
            group = self.factor(tag)
            if carry is not None:
                value = group.multiply(carry, value)
            if i == len(syllables) - 1:
                result.append((tag, value))
                break
            representative = self.edge_subgroup(tag).coset_rep(value)
            remainder = group.multiply(group.invert(representative), value)
            result.append((tag, representative))
            carry = self.transfer(tag, remainder)
        return NormalForm(tuple(result), AMALGAM)

    def check_invariants(self, nf: NormalForm) -> bool:
        syllables = nf.syllables
        for i, (tag, value) in enumerate(syllables):
            if tag not in (TAG_K, TAG_L):
                return False
            if self.factor(tag).is_identity(value):
                return False
            if i > 0 and syllables[i - 1][0] == tag:
                return False
            if len(syllables) > 1 and self.in_amalgamated(tag, value):
                return False
        return True

    def in_edge_group(self, element: NormalForm) -> bool:
        if element.is_identity:
            return True
        if len(element) != 1:
            return False
        tag, value = element.syllables[0]
        return self.in_amalgamated(tag, value)

    def factor_element(self, element: NormalForm, tag: str) -> Optional[Any]:
        if element.is_identity:
            return self.factor(tag).identity()
        if len(element) != 1:
            return None
        own_tag, value = element.syllables[0]
        if own_tag == tag:
            return value
        if self.in_amalgamated(own_tag, value):
            return self.transfer(own_tag, value)
        return None


class HnnDatum(GroupDatum):
    """
    HNN 扩张 ⟨GK, t | t⁻¹ a t = φ(a)⟩

    φ 把 A1 的第 i 个生成元映到 A2 的第 i 个生成元。
    """

    context = HNN

    def __init__(self, name: str, sub_a1: Subgroup, sub_a2: Subgroup):
        super().__init__(name)
        if sub_a1.group is not sub_a2.group:
            raise GroupError(f"HNN 扩张 {name} 的两个子群必须在同一个群中")
        if len(sub_a1.generators) != len(sub_a2.generators):
            raise GroupError(f"HNN 扩张 {name} 的 φ 在生成元上不是双射")
        self.gk = sub_a1.group
        self.sub_a1 = sub_a1
        self.sub_a2 = sub_a2
        for i, (x, y) in enumerate(zip(sub_a1.generators, sub_a2.generators)):
            if self.gk.element_order(x, sub_a1.cap) != self.gk.element_order(y, sub_a2.cap):
                raise GroupError(f"HNN 扩张 {name} 的第 {i} 个生成元与其 φ-像的阶不同")
        self.logger.debug(f"HNN 扩张 {name} 构建完成")

    def factor(self, tag: str) -> GroupOracle:
        if tag == TAG_K:
            return self.gk
        raise InvalidElementError(f"HNN 扩张中没有因子 {tag}")

    def tags(self) -> Tuple[str, ...]:
        return (TAG_K,)

    def phi(self, value: Any) -> Any:
        word = self.sub_a1.express(value)
        return self.gk.evaluate(word, self.sub_a2.generators)

    def phi_inverse(self, value: Any) -> Any:
        word = self.sub_a2.express(value)
        return self.gk.evaluate(word, self.sub_a1.generators)

    def reduce(self, word: Sequence[Syllable]) -> NormalForm:
        return hnn_nf(word, self)

    def canonical(self, nf: NormalForm) -> NormalForm:
        """
        从左到右规范化：t 之前取 A1-陪集代表元、T 之前取 A2-陪集代表元，
        余项经 φ（或 φ⁻¹）越过稳定字母并入下一段
        """
        syllables = self.reduce(nf.syllables).syllables
        segments: List[Any] = [self.gk.identity()]
        letters: List[int] = []
        for tag, value in syllables:
            if tag == TAG_T:
                letters.append(value)
                segments.append(self.gk.identity())
            else:
                segments[-1] = self.gk.multiply(segments[-1], value)

        result: List[Syllable] = []
        for i, letter in enumerate(letters):
            sub = self.sub_a1 if letter > 0 else self.sub_a2
            representative = sub.coset_rep(segments[i])
            remainder = self.gk.multiply(self.gk.invert(representative), segments[i])
            carried = self.phi(remainder) if letter > 0 else self.phi_inverse(remainder)
            segments[i + 1] = self.gk.multiply(carried, segments[i + 1])
            if not self.gk.is_identity(representative):
                result.append((TAG_K, representative))
            result.append((TAG_T, letter))
        if not self.gk.is_identity(segments[-1]):
            result.append((TAG_K, segments[-1]))
        return NormalForm(tuple(result), HNN)

    def check_invariants(self, nf: NormalForm) -> bool:
        syllables = nf.syllables
        for i, (tag, value) in enumerate(syllables):
            if tag == TAG_K:
                if self.gk.is_identity(value):
                    return False
                if i > 0 and syllables[i - 1][0] == TAG_K:
                    return False
            elif tag != TAG_T or value not in (1, -1):
                return False
        return _find_pinch(list(syllables), self) is None

    def in_edge_group(self, element: NormalForm) -> bool:
        if element.is_identity:
            return True
        if len(element) != 1 or element.syllables[0][0] != TAG_K:
            return False
        value = element.syllables[0][1]
        return self._member(self.sub_a1, value) or self._member(self.sub_a2, value)

    def factor_element(self, element: NormalForm, tag: str) -> Optional[Any]:
        if element.is_identity:
            return self.gk.identity()
        if len(element) == 1 and element.syllables[0][0] == TAG_K and tag == TAG_K:
            return element.syllables[0][1]
        return None

    def stable_letter(self, exponent: int = 1) -> NormalForm:
        return NormalForm(((TAG_T, exponent),), HNN)


def amalgam_nf(word: Sequence[Syllable], datum: AmalgamDatum) -> NormalForm:
    """
    融合积正规形约化

    去掉单位音节、合并同标签相邻音节、把落在 GA 中的音节并入左邻（无左邻则右邻），
    重复直到不动点。

    Raises:
        InvalidElementError: 音节标签不是 K/L
        MembershipInconclusive: 子群判定达到上限
    """
    syllables: List[Syllable] = []
    for tag, value in word:
        if tag not in (TAG_K, TAG_L):
            raise InvalidElementError(f"融合积中没有因子 {tag}")
        syllables.append((tag, value))

    changed = True
    while changed:
        changed = False
        merged: List[Syllable] = []
        for tag, value in syllables:
            group = datum.factor(tag)
            if group.is_identity(value):
                changed = True
                continue
            if merged and merged[-1][0] == tag:
                product = group.multiply(merged[-1][1], value)
                changed = True
                if group.is_identity(product):
                    merged.pop()
                else:
                    merged[-1] = (tag, product)
                continue
            merged.append((tag, value))
        syllables = merged

        if len(syllables) > 1:
            for i, (tag, value) in enumerate(syllables):
                if not datum.in_amalgamated(tag, value):
                    continue
                if i > 0:
                    left_tag, left_value = syllables[i - 1]
                    moved = datum.transfer(tag, value)
                    syllables[i - 1] = (left_tag, datum.factor(left_tag).multiply(left_value, moved))
                else:
                    right_tag, right_value = syllables[1]
                    moved = datum.transfer(tag, value)
                    syllables[1] = (right_tag, datum.factor(right_tag).multiply(moved, right_value))
                del syllables[i]
                changed = True
                break

    nf = NormalForm(tuple(syllables), AMALGAM)
    if not datum.check_invariants(nf):
        raise GroupError(f"约化结果不满足正规形条件: {datum.format_element(nf)}")
    return nf


def _find_pinch(syllables: List[Syllable], datum: HnnDatum) -> Optional[Tuple[int, int, Optional[Syllable]]]:
    """最左（即最内层）的夹子：返回 (起点, 终点, 替换音节)"""
    for i, (tag, value) in enumerate(syllables):
        if tag != TAG_T:
            continue
        if i + 1 < len(syllables) and syllables[i + 1] == (TAG_T, -value):
            return (i, i + 2, None)
        if (i + 2 < len(syllables) and syllables[i + 1][0] == TAG_K
                and syllables[i + 2] == (TAG_T, -value)):
            middle = syllables[i + 1][1]
            if value < 0 and datum.sub_a1.is_member(middle):
                return (i, i + 3, (TAG_K, datum.phi(middle)))
            if value > 0 and datum.sub_a2.is_member(middle):
                return (i, i + 3, (TAG_K, datum.phi_inverse(middle)))
    return None


def hnn_nf(word: Sequence[Syllable], datum: HnnDatum) -> NormalForm:
    """
    HNN 正规形（Britton 约化）

    反复合并相邻 K-音节并消去最左的夹子 t⁻¹·a·t（a∈A1）或 t·b·t⁻¹（b∈A2）。

    Raises:
        InvalidElementError: 音节标签不是 K/t
        MembershipInconclusive: 子群判定达到上限
    """
    syllables: List[Syllable] = []
    for tag, value in word:
        if tag == TAG_T:
            if value not in (1, -1):
                raise InvalidElementError(f"稳定字母的指数必须是 ±1: {value}")
        elif tag != TAG_K:
            raise InvalidElementError(f"HNN 扩张中没有因子 {tag}")
        syllables.append((tag, value))

    while True:
        merged: List[Syllable] = []
        for tag, value in syllables:
            if tag == TAG_K:
                if datum.gk.is_identity(value):
                    continue
                if merged and merged[-1][0] == TAG_K:
                    product = datum.gk.multiply(merged[-1][1], value)
                    if datum.gk.is_identity(product):
                        merged.pop()
                    else:
                        merged[-1] = (TAG_K, product)
                    continue
            merged.append((tag, value))
        syllables = merged

        pinch = _find_pinch(syllables, datum)
        if pinch is None:
            break
        start, end, replacement = pinch
        syllables[start:end] = [replacement] if replacement is not None else []

    nf = NormalForm(tuple(syllables), HNN)
    if not datum.check_invariants(nf):
        raise GroupError(f"约化结果不满足正规形条件: {datum.format_element(nf)}")
    return nf


def canonical_form(nf: NormalForm, datum: GroupDatum) -> NormalForm:
    return datum.canonical(nf)


def check_nf_invariants(nf: NormalForm, datum: GroupDatum) -> bool:
    return datum.check_invariants(nf)


def nf_equivalent(n1: NormalForm, n2: NormalForm, datum: GroupDatum) -> bool:
    """
    两个正规形是否相差逐音节的边群元素

    长度不同直接判否；否则从左到右做陪集检验（即比较规范形）。
    """
    if n1.context != n2.context:
        raise GroupError("不能比较不同类型数据上的正规形")
    if datum.syllable_length(n1) != datum.syllable_length(n2):
        return False
    if n1.context == AMALGAM and len(n1) != len(n2):
        return False
    return datum.canonical(n1) == datum.canonical(n2)
