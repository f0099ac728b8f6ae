"""
群判定模块
提供有限群（乘法表）、有限生成自由群、直积三类群判定器，
以及子群成员判定、见证词与左陪集代表元
"""

import functools
import itertools
import math
import operator
from abc import ABC, abstractmethod
from collections import deque
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy.combinatorics import Permutation, PermutationGroup
from sympy.combinatorics.free_groups import FreeGroupElement, free_group

from ..utils.logger import get_logger
from ..utils.constants import DEFAULT_MEMBERSHIP_CAP
from ..utils.exceptions import (
    GroupError, InfiniteGroupError, InvalidElementError, MembershipInconclusive,
)

GeneratorWord = List[Tuple[int, int]]


class Membership(Enum):
    """子群成员判定结果"""
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"


class GroupOracle(ABC):
    """群判定器基类：单位元、乘法、求逆、相等与规范元素序"""

    kind = 'abstract'

    def __init__(self, name: str):
        self.name = name
        self.logger = get_logger(__name__)

    @abstractmethod
    def identity(self) -> Any:
        pass

    @abstractmethod
    def multiply(self, a: Any, b: Any) -> Any:
        pass

    @abstractmethod
    def invert(self, a: Any) -> Any:
        pass

    @abstractmethod
    def sort_key(self, a: Any) -> Tuple:
        """规范元素序（陪集代表元取最小者）"""
        pass

    @abstractmethod
    def parse_element(self, text: str) -> Any:
        pass

    @abstractmethod
    def format_element(self, a: Any) -> str:
        pass

    @abstractmethod
    def generators(self) -> List[Any]:
        pass

    @property
    def is_finite(self) -> bool:
        return False

    def is_identity(self, a: Any) -> bool:
        return a == self.identity()

    def equal(self, a: Any, b: Any) -> bool:
        return a == b

    def word_length(self, a: Any) -> int:
        return 0 if self.is_identity(a) else 1

    def elements(self) -> List[Any]:
        raise InfiniteGroupError(f"群 {self.name} 不是有限群")

    def order(self) -> int:
        return len(self.elements())

    def power(self, a: Any, n: int) -> Any:
        base = a if n >= 0 else self.invert(a)
        result = self.identity()
        for _ in range(abs(n)):
            result = self.multiply(result, base)
        return result

    def element_order(self, a: Any, cap: int = DEFAULT_MEMBERSHIP_CAP) -> Optional[int]:
        """元素的阶；无限阶（或超过上限）返回 None"""
        value = a
        for k in range(1, cap + 1):
            if self.is_identity(value):
                return k
            value = self.multiply(value, a)
        return None

    def evaluate(self, word: GeneratorWord, images: Sequence[Any]) -> Any:
        """在给定生成元像上计算生成元词"""
        result = self.identity()
        for index, exponent in word:
            image = images[index] if exponent > 0 else self.invert(images[index])
            result = self.multiply(result, image)
        return result

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.name!r})"


class FiniteGroup(GroupOracle):
    """
    乘法表给出的有限群，元素为 0..n-1

    内部用左正则表示 a ↦ (x ↦ a·x) 建成 sympy 置换群，
    结合律、阶与元素阶都在置换群上计算。
    """

    kind = 'finite'

    def __init__(self, name: str, table: Sequence[Sequence[int]]):
        super().__init__(name)
        self.table: Tuple[Tuple[int, ...], ...] = tuple(tuple(row) for row in table)
        self._permutations = self._regular_permutations()
        self._identity = self._validate()
        self.permutation_group = PermutationGroup(list(self._permutations))
        self._inverse = tuple((~p).array_form[self._identity] for p in self._permutations)
        self.logger.debug(f"有限群 {name} 校验通过, 阶 {self.size}")

    @property
    def size(self) -> int:
        return len(self.table)

    def _regular_permutations(self) -> Tuple[Permutation, ...]:
        n = self.size
        if n == 0:
            raise GroupError(f"群 {self.name} 的乘法表为空")
        permutations = []
        for row in self.table:
            if len(row) != n:
                raise GroupError(f"群 {self.name} 的乘法表不是拉丁方")
            try:
                permutations.append(Permutation(list(row)))
            except ValueError:
                raise GroupError(f"群 {self.name} 的乘法表不是拉丁方")
        return tuple(permutations)

    def _validate(self) -> int:
        n = self.size
        identities = [e for e in range(n) if self._permutations[e].is_Identity]
        if not identities:
            raise GroupError(f"群 {self.name} 没有单位元")
        e = identities[0]
        if any(self.table[x][e] != x for x in range(n)):
            raise GroupError(f"群 {self.name} 的单位元不是双边的")
        # sympy 中 p*q 先作用 p；L_b*L_a 即 x ↦ a·(b·x)，须等于 L_{ab}
        for a, b in itertools.product(range(n), repeat=2):
            if self._permutations[b] * self._permutations[a] != self._permutations[self.table[a][b]]:
                raise GroupError(f"群 {self.name} 不满足结合律: ({a},{b},·)")
        return e

    @property
    def is_finite(self) -> bool:
        return True

    def identity(self) -> int:
        return self._identity

    def multiply(self, a: int, b: int) -> int:
        return self.table[a][b]

    def invert(self, a: int) -> int:
        return self._inverse[a]

    def permutation(self, a: int) -> Permutation:
        """元素 a 的左正则置换"""
        return self._permutations[a]

    def from_permutation(self, p: Permutation) -> int:
        return p.array_form[self._identity]

    def sort_key(self, a: int) -> Tuple:
        return (a,)

    def parse_element(self, text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise InvalidElementError(f"群 {self.name} 的元素必须是序号: {text}")
        if not 0 <= value < self.size:
            raise InvalidElementError(f"群 {self.name} 中没有元素 {value}")
        return value

    def format_element(self, a: int) -> str:
        return str(a)

    def generators(self) -> List[int]:
        return [a for a in range(self.size) if a != self._identity]

    def elements(self) -> List[int]:
        return list(range(self.size))

    def order(self) -> int:
        return int(self.permutation_group.order())

    def element_order(self, a: int, cap: int = DEFAULT_MEMBERSHIP_CAP) -> Optional[int]:
        return int(self._permutations[a].order())


class FreeGroup(GroupOracle):
    """
    有限生成自由群，元素为 sympy 的 FreeGroupElement

    文本中小写字母为生成元，大写为其逆，"1" 为单位元。
    字母序列（Stallings 折叠与元素序用）记作 +(i+1) / -(i+1)。
    """

    kind = 'free'

    def __init__(self, name: str, letters: Sequence[str]):
        super().__init__(name)
        for letter in letters:
            if len(letter) != 1 or not letter.islower():
                raise GroupError(f"自由群 {name} 的生成元必须是单个小写字母: {letter}")
        if len(set(letters)) != len(letters):
            raise GroupError(f"自由群 {name} 的生成元重复")
        if not letters:
            raise GroupError(f"自由群 {name} 至少需要一个生成元")
        self.letters: Tuple[str, ...] = tuple(letters)
        self._group, *self._generators = free_group(','.join(self.letters))
        self._index = {letter: i + 1 for i, letter in enumerate(self.letters)}
        self._symbol_index = {symbol: i + 1 for i, symbol in enumerate(self._group.symbols)}

    @property
    def rank(self) -> int:
        return len(self.letters)

    def identity(self) -> FreeGroupElement:
        return self._group.identity

    def is_identity(self, a: FreeGroupElement) -> bool:
        return a.is_identity

    def from_letters(self, word: Sequence[int]) -> FreeGroupElement:
        """字母序列的乘积（自动自由约化）"""
        factors = [
            self._generators[abs(x) - 1] if x > 0 else self._generators[abs(x) - 1] ** -1 for x in word
        ]
        return functools.reduce(operator.mul, factors, self._group.identity)

    def to_letters(self, a: FreeGroupElement) -> Tuple[int, ...]:
        return tuple(
            self._symbol_index[symbol] * (1 if exponent > 0 else -1)
            for symbol, exponent in a.array_form
            for _ in range(abs(exponent))
        )

    def multiply(self, a: FreeGroupElement, b: FreeGroupElement) -> FreeGroupElement:
        return a * b

    def invert(self, a: FreeGroupElement) -> FreeGroupElement:
        return a.inverse()

    @staticmethod
    def letter_rank(letter: int) -> int:
        """字母序：a < A < b < B < …"""
        return 2 * (abs(letter) - 1) + (0 if letter > 0 else 1)

    def sort_key(self, a: FreeGroupElement) -> Tuple:
        return (len(a), tuple(self.letter_rank(x) for x in self.to_letters(a)))

    def word_length(self, a: FreeGroupElement) -> int:
        return len(a)

    def parse_element(self, text: str) -> FreeGroupElement:
        text = text.strip()
        if text in ('1', 'e', ''):
            return self.identity()
        word = []
        for char in text:
            if char in self._index:
                word.append(self._index[char])
            elif char.lower() in self._index:
                word.append(-self._index[char.lower()])
            else:
                raise InvalidElementError(f"自由群 {self.name} 中没有字母 {char}")
        return self.from_letters(word)

    def format_element(self, a: FreeGroupElement) -> str:
        if a.is_identity:
            return '1'
        return ''.join(
            self.letters[x - 1] if x > 0 else self.letters[-x - 1].upper() for x in self.to_letters(a)
        )

    def generators(self) -> List[FreeGroupElement]:
        return list(self._generators)

    def element_order(self, a: FreeGroupElement, cap: int = DEFAULT_MEMBERSHIP_CAP) -> Optional[int]:
        return 1 if a.is_identity else None


class DirectProduct(GroupOracle):
    """有限个群的直积，元素为分量元组"""

    kind = 'product'

    def __init__(self, name: str, factors: Sequence[GroupOracle]):
        super().__init__(name)
        if len(factors) < 2:
            raise GroupError(f"直积 {name} 至少需要两个因子")
        self.factors: Tuple[GroupOracle, ...] = tuple(factors)

    @property
    def is_finite(self) -> bool:
        return all(f.is_finite for f in self.factors)

    def identity(self) -> Tuple:
        return tuple(f.identity() for f in self.factors)

    def multiply(self, a: Tuple, b: Tuple) -> Tuple:
        return tuple(f.multiply(x, y) for f, x, y in zip(self.factors, a, b))

    def invert(self, a: Tuple) -> Tuple:
        return tuple(f.invert(x) for f, x in zip(self.factors, a))

    def sort_key(self, a: Tuple) -> Tuple:
        return tuple(f.sort_key(x) for f, x in zip(self.factors, a))

    def word_length(self, a: Tuple) -> int:
        return sum(f.word_length(x) for f, x in zip(self.factors, a))

    def parse_element(self, text: str) -> Tuple:
        text = text.strip()
        if not (text.startswith('(') and text.endswith(')')):
            raise InvalidElementError(f"直积元素必须写成 (x,y,...): {text}")
        parts, depth, current = [], 0, ''
        for char in text[1:-1]:
            if char == ',' and depth == 0:
                parts.append(current)
                current = ''
                continue
            depth += char == '('
            depth -= char == ')'
            current += char
        parts.append(current)
        if len(parts) != len(self.factors):
            raise InvalidElementError(f"直积 {self.name} 的元素分量数目错误: {text}")
        return tuple(f.parse_element(p) for f, p in zip(self.factors, parts))

    def format_element(self, a: Tuple) -> str:
        return '(' + ','.join(f.format_element(x) for f, x in zip(self.factors, a)) + ')'

    def generators(self) -> List[Tuple]:
        result = []
        for i, factor in enumerate(self.factors):
            for g in factor.generators():
                element = list(self.identity())
                element[i] = g
                result.append(tuple(element))
        return result

    def elements(self) -> List[Tuple]:
        if not self.is_finite:
            raise InfiniteGroupError(f"群 {self.name} 不是有限群")
        return [tuple(p) for p in itertools.product(*(f.elements() for f in self.factors))]

    def element_order(self, a: Tuple, cap: int = DEFAULT_MEMBERSHIP_CAP) -> Optional[int]:
        orders = [f.element_order(x, cap) for f, x in zip(self.factors, a)]
        if any(o is None for o in orders):
            return None
        result = 1
        for o in orders:
            result = result * o // math.gcd(result, o)
        return result


class _FoldedGraph:
    """
    Stallings 折叠图

    基点为 0；transitions[(u, x)] = v 对正负字母都记录，折叠后确定。
    """

    def __init__(self, generator_words: Sequence[Tuple[int, ...]]):
        self._parent: List[int] = [0]
        edges: List[Tuple[int, int, int]] = []
        for word in generator_words:
            if not word:
                continue
            current = 0
            for position, letter in enumerate(word):
                if position == len(word) - 1:
                    target = 0
                else:
                    target = len(self._parent)
                    self._parent.append(target)
                edges.append((current, letter, target))
                current = target
        self.transitions = self._fold(edges)

    def _find(self, v: int) -> int:
        while self._parent[v] != v:
            self._parent[v] = self._parent[self._parent[v]]
            v = self._parent[v]
        return v

    def _fold(self, edges: List[Tuple[int, int, int]]) -> Dict[Tuple[int, int], int]:
        while True:
            transitions: Dict[Tuple[int, int], int] = {}
            merged = False
            for u, letter, v in edges:
                u, v = self._find(u), self._find(v)
                for source, label, target in ((u, letter, v), (v, -letter, u)):
                    existing = transitions.get((source, label))
                    if existing is None:
                        transitions[(source, label)] = target
                    elif existing != target:
                        a, b = sorted((existing, target))
                        self._parent[b] = a
                        merged = True
                        break
                if merged:
                    break
            if not merged:
                return transitions

    def read(self, word: Sequence[int], start: int = 0) -> Optional[int]:
        current = start
        for letter in word:
            current = self.transitions.get((current, letter))
            if current is None:
                return None
        return current


class Subgroup:
    """
    由生成元给出的子群

    自由群用 Stallings 折叠精确判定成员与陪集代表元；
    乘法表群交给 sympy 置换群（Schreier-Sims）精确判定；
    直积用带上限的闭包枚举。见证词一律由闭包枚举给出。
    """

    def __init__(self, group: GroupOracle, generators: Sequence[Any], name: str = '',
                 cap: int = DEFAULT_MEMBERSHIP_CAP):
        self.group = group
        self.generators: Tuple[Any, ...] = tuple(generators)
        self.name = name or f"<{','.join(group.format_element(g) for g in generators)}>"
        self.cap = cap
        self.logger = get_logger(__name__)
        self._graph: Optional[_FoldedGraph] = None
        self._permutations: Optional[PermutationGroup] = None
        self._closure: Optional[Dict[Any, GeneratorWord]] = None
        self._closure_complete = False
        self._witness_cache: Dict[Any, GeneratorWord] = {}

    # ---- 闭包枚举 ----

    def _generator_steps(self) -> List[Tuple[Tuple[int, int], Any]]:
        steps = []
        for i, g in enumerate(self.generators):
            steps.append(((i, 1), g))
            steps.append(((i, -1), self.group.invert(g)))
        return steps

    def _enumerate(self, cap: int, target: Any = None) -> Tuple[Dict[Any, GeneratorWord], bool]:
        """广度优先枚举子群元素，返回 (元素→生成元词, 是否穷尽)"""
        if self._closure is not None and (self._closure_complete or len(self._closure) >= cap):
            return self._closure, self._closure_complete
        identity = self.group.identity()
        words: Dict[Any, GeneratorWord] = {identity: []}
        queue = deque([identity])
        steps = self._generator_steps()
        complete = True
        while queue:
            element = queue.popleft()
            if target is not None and element == target:
                complete = False
                break
            for step, g in steps:
                neighbour = self.group.multiply(element, g)
                if neighbour not in words:
                    if len(words) >= cap:
                        complete = False
                        queue.clear()
                        break
                    words[neighbour] = words[element] + [step]
                    queue.append(neighbour)
        if target is None or complete:
            self._closure, self._closure_complete = words, complete
        return words, complete

    def _folded(self) -> _FoldedGraph:
        if self._graph is None:
            self._graph = _FoldedGraph([self.group.to_letters(g) for g in self.generators])
        return self._graph

    def _permutation_subgroup(self) -> PermutationGroup:
        if self._permutations is None:
            generators = self.generators or (self.group.identity(),)
            self._permutations = PermutationGroup([self.group.permutation(g) for g in generators])
        return self._permutations

    # ---- 成员判定 ----

    def contains(self, g: Any, cap: Optional[int] = None) -> Membership:
        cap = cap or self.cap
        if self.group.is_identity(g):
            return Membership.YES
        if isinstance(self.group, FreeGroup):
            return Membership.YES if self._folded().read(self.group.to_letters(g)) == 0 else Membership.NO
        if isinstance(self.group, FiniteGroup):
            member = self._permutation_subgroup().contains(self.group.permutation(g))
            return Membership.YES if member else Membership.NO
        words, complete = self._enumerate(cap, target=g)
        if g in words:
            return Membership.YES
        if complete:
            return Membership.NO
        self.logger.warning(f"⚠️ 子群 {self.name} 成员判定达到上限 {cap}")
        return Membership.INCONCLUSIVE

    def is_member(self, g: Any, cap: Optional[int] = None) -> bool:
        """成员判定；无法判定时抛出 MembershipInconclusive"""
        status = self.contains(g, cap)
        if status is Membership.INCONCLUSIVE:
            raise MembershipInconclusive(
                f"无法判定 {self.group.format_element(g)} 是否属于子群 {self.name}"
            )
        return status is Membership.YES

    def express(self, g: Any, cap: Optional[int] = None) -> GeneratorWord:
        """
        把子群元素写成生成元词

        Raises:
            GroupError: g 不在子群中
            MembershipInconclusive: 在上限内找不到见证
        """
        if g in self._witness_cache:
            return self._witness_cache[g]
        cap = cap or self.cap
        if not self.is_member(g, cap):
            raise GroupError(f"{self.group.format_element(g)} 不属于子群 {self.name}")
        words, _ = self._enumerate(cap, target=g)
        if g not in words:
            raise MembershipInconclusive(
                f"在上限 {cap} 内找不到 {self.group.format_element(g)} 的生成元表示"
            )
        self._witness_cache[g] = words[g]
        return words[g]

    # ---- 陪集代表元 ----

    def coset_rep(self, g: Any, cap: Optional[int] = None) -> Any:
        """左陪集 g·H 在规范元素序下的最小元"""
        cap = cap or self.cap
        if isinstance(self.group, FreeGroup):
            return self._free_coset_rep(g)
        if isinstance(self.group, FiniteGroup):
            members = [self.group.from_permutation(p) for p in self._permutation_subgroup().generate()]
        else:
            words, complete = self._enumerate(cap)
            if not complete:
                raise MembershipInconclusive(f"子群 {self.name} 的闭包超过上限 {cap}，无法选取陪集代表元")
            members = list(words)
        return min((self.group.multiply(g, h) for h in members), key=self.group.sort_key)

    def _free_coset_rep(self, g: FreeGroupElement) -> FreeGroupElement:
        graph = self._folded()
        transitions = dict(graph.transitions)
        next_vertex = max([0] + [v for (_, v) in transitions.items()] + [u for (u, _) in transitions]) + 1

        current = 0
        for letter in self.group.to_letters(self.group.invert(g)):
            target = transitions.get((current, letter))
            if target is None:
                target = next_vertex
                next_vertex += 1
                transitions[(current, letter)] = target
                transitions[(target, -letter)] = current
            current = target

        adjacency: Dict[int, List[Tuple[int, int]]] = {}
        for (u, letter), v in transitions.items():
            adjacency.setdefault(u, []).append((letter, v))
        distance = {0: 0}
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for _, v in adjacency.get(u, []):
                if v not in distance:
                    distance[v] = distance[u] + 1
                    queue.append(v)

        word: List[int] = []
        while current != 0:
            options = sorted(adjacency[current], key=lambda lv: FreeGroup.letter_rank(lv[0]))
            letter, current = next(
                (letter, v) for letter, v in options if distance.get(v) == distance[current] - 1
            )
            word.append(letter)
        return self.group.from_letters(word)

    def __repr__(self) -> str:
        return f"Subgroup({self.name} ≤ {self.group.name})"


def subgroup_membership(g: Any, sub: Subgroup, cap: Optional[int] = None) -> Membership:
    return sub.contains(g, cap)


def coset_rep(g: Any, sub: Subgroup, cap: Optional[int] = None) -> Any:
    return sub.coset_rep(g, cap)
