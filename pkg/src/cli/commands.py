"""
命令分派模块
把命令与选择器翻译为各计算模块的调用，结果汇总为 Report
"""

from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

from ..core.actions import average
from ..core.algebra import (
    Chain, RelativePair, boundary, boundary_bound_report, coboundary, is_relative_cycle, l1, linf,
    relative_norm,
)
from ..core.cover import CoverVertex, GluedSpace, MinimizingPath
from ..core.glue import are_isomorphic, cut, double, euler_characteristic_with_loops, glue_cycles
from ..core.mcx import (
    CheckReport, Multicomplex, SimplexRef, SubcomplexMask, check_aspherical, check_edge_complete,
    check_unique_edges,
)
from ..core.normal_forms import GroupDatum, Syllable
from ..core.normlp import LpProblem, NormMinimizer
from ..core.retraction import Retraction
from ..core.simplex import PivotRecord
from ..utils.constants import COMMANDS, LP_VALUE_LABEL, STATUS_FAIL, STATUS_PASS
from ..utils.exceptions import (
    CapExceededError, SimplicialNormError, UnresolvedReferenceError, ValidationError,
)
from ..utils.helpers import format_rational
from ..utils.logger import get_logger
from ..workspace.models import Report, RunSettings, Workspace


@dataclass
class CommandOptions:
    """命令行选择器；未给出的为 None"""
    complex: Optional[str] = None
    class_name: Optional[str] = None
    chain: List[str] = field(default_factory=list)
    cochain: Optional[str] = None
    cochain2: Optional[str] = None
    sub: Optional[str] = None
    space: Optional[str] = None
    simplex: Optional[str] = None
    vertices: List[str] = field(default_factory=list)
    word: Optional[str] = None
    datum: Optional[str] = None
    glue: Optional[str] = None
    action: Optional[str] = None
    degree: Optional[int] = None
    relative: Optional[str] = None
    collar: Optional[str] = None

    @classmethod
    def from_namespace(cls, namespace: Any) -> 'CommandOptions':
        values = {}
        for item in fields(cls):
            value = getattr(namespace, item.name, None)
            if value is not None:
                values[item.name] = value
        return cls(**values)


def _status(passed: bool) -> str:
    return STATUS_PASS if passed else STATUS_FAIL


def _q(value: Fraction) -> str:
    return format_rational(Fraction(value))


def _pivot_rows(pivots: List[PivotRecord]) -> List[Dict[str, str]]:
    return [
        {'step': str(i), 'phase': str(p.phase), 'entering': p.entering, 'leaving': p.leaving}
        for i, p in enumerate(pivots, start=1)
    ]


def _check_row(report: CheckReport) -> Dict[str, str]:
    return {'check': report.check, 'status': report.status, 'details': '; '.join(report.details) or '-'}


class CommandRunner:
    """
    命令执行器

    一次运行只读工作区，按固定顺序遍历所有集合，输出逐字节确定。
    """

    def __init__(self, workspace: Workspace, settings: Optional[RunSettings] = None,
                 options: Optional[CommandOptions] = None):
        self.logger = get_logger(__name__)
        self.workspace = workspace
        self.settings = settings or RunSettings()
        self.options = options or CommandOptions()
        self.minimizer = NormMinimizer(trace=self.settings.lp_trace)
        self._commands: Dict[str, Callable[[Report], None]] = {
            name: getattr(self, f"_cmd_{name}") for name in COMMANDS
        }

    def run(self, command: str) -> Report:
        if command not in self._commands:
            raise ValidationError(f"未知命令: {command}，可用命令: {', '.join(COMMANDS)}")
        report = Report(command)
        self.logger.info(f"▶️ 执行命令 {command}")
        try:
            self._commands[command](report)
        except SimplicialNormError as e:
            self.logger.error(f"❌ 命令 {command} 失败: {e}")
            raise
        self.logger.info(f"✅ 命令 {command} 完成: {report.status}")
        return report

    # ------------------------------------------------------------------
    # 选择器
    # ------------------------------------------------------------------

    def _require(self, value: Any, flag: str) -> Any:
        if value is None or value == []:
            raise ValidationError(f"该命令需要 {flag}")
        return value

    def _class_chain(self) -> Chain:
        name = self.options.class_name or (self.options.chain[0] if self.options.chain else None)
        return self.workspace.chain(self._require(name, '--class 或 --chain'))

    def _mask_on(self, complex_: Multicomplex, name: str) -> SubcomplexMask:
        return self.workspace.mask(complex_.name, name)

    def _relative_pair(self, complex_: Multicomplex) -> Optional[RelativePair]:
        if not self.options.relative:
            return None
        return RelativePair(complex_, self._mask_on(complex_, self.options.relative))

    def _space(self) -> GluedSpace:
        name = self._require(self.options.space, '--space')
        return self.workspace.build_space(name, self.settings.cover_caps())

    def _cover_vertex(self, space: GluedSpace, text: str) -> CoverVertex:
        """<元素>@<顶点> 或 <顶点>；元素中的音节用 '.' 分隔"""
        element_text, sep, vertex = text.rpartition('@')
        if not sep:
            element_text, vertex = '1', text
        if vertex not in space.complex.vertex_names:
            raise UnresolvedReferenceError(f"粘合空间 {space.name} 中没有顶点 {vertex}")
        g = space.datum.parse_element(element_text.replace('.', ' '))
        return CoverVertex(g, space.complex.vertex_id(vertex))

    def _glued_simplex(self, complex_: Multicomplex, sid: str) -> SimplexRef:
        if not complex_.has_id(sid):
            raise UnresolvedReferenceError(f"复形 {complex_.name} 中没有单形 {sid}")
        return complex_.by_id(sid)

    # ------------------------------------------------------------------
    # check
    # ------------------------------------------------------------------

    def _cmd_check(self, report: Report):
        rows: List[Dict[str, str]] = []
        if self.options.complex:
            complex_ = self.workspace.complex(self.options.complex)
            mask = self._mask_on(complex_, self.options.sub) if self.options.sub else None
            report.add('complex', complex_.name)
            report.add('f_vector', [str(n) for n in complex_.f_vector()])
            report.add('euler_characteristic', str(complex_.euler_characteristic()))
            rows.append({'check': 'face_identities', 'status': STATUS_PASS, 'details': '-'})
            rows.append(_check_row(check_aspherical(complex_, mask)))
            rows.append(_check_row(check_edge_complete(complex_, mask)))
            rows.append(_check_row(check_unique_edges(complex_)))
        if self.options.space:
            space = self._space()
            retraction = Retraction(space, self.settings.workers)
            report.add('space', space.describe())
            rows.append({'check': 'flat_labels', 'status': STATUS_PASS, 'details': '-'})
            for verification in (retraction.verify_chain_map(self.options.degree),
                                 retraction.verify_retraction()):
                rows.append({
                    'check': verification.check,
                    'status': verification.status,
                    'details': f"{verification.checked} checked; " + '; '.join(verification.failures)
                    if verification.failures else f"{verification.checked} checked",
                })
            if space.action is not None:
                # 两种轨道规范化的差异
                rows.append({
                    'check': 'orbit_modes',
                    'status': _status(not space.discrepancies),
                    'details': '; '.join(dict.fromkeys(space.discrepancies)) or '-',
                })
        if self.options.action:
            action = self.workspace.action(self.options.action)
            rows.append({
                'check': 'group_action',
                'status': _status(action.verify()),
                'details': f"|G| = {len(action.elements())}",
            })
        if not rows:
            raise ValidationError("check 需要 --complex、--space 或 --action")
        report.add_table('checks', rows)
        report.status = _status(all(row['status'] == STATUS_PASS for row in rows))

    # ------------------------------------------------------------------
    # 范数线性规划
    # ------------------------------------------------------------------

    def _cmd_norm(self, report: Report):
        z = self._class_chain()
        relative = self._relative_pair(z.complex)
        result = self.minimizer.solve_representative(z, relative)
        bound = boundary_bound_report(result.chain)
        report.add('complex', z.complex.name)
        report.add('degree', str(z.dim))
        report.add('input_norm', _q(relative_norm(z, relative) if relative else l1(z)))
        report.add('value', _q(result.value))
        report.add('value_label', LP_VALUE_LABEL)
        report.add('boundary_norm', _q(bound.boundary_norm))
        report.add('within_trivial_bound', bound.within_trivial_bound)
        report.add('within_sharp_bound', bound.within_sharp_bound)
        report.add_table('representative', result.chain.rows())
        if self.settings.lp_trace:
            report.add_table('pivots', _pivot_rows(result.pivots))
        if not bound.within_trivial_bound:
            report.status = STATUS_FAIL

    def _cmd_certificate(self, report: Report):
        z = self._class_chain()
        relative = self._relative_pair(z.complex) or RelativePair(z.complex)
        certificate = self.minimizer.dual_certificate(LpProblem(z, relative))
        report.status = STATUS_PASS
        report.add('complex', z.complex.name)
        report.add('primal_value', _q(certificate.primal_value))
        report.add('dual_value', _q(certificate.dual_value))
        report.add('dual_sup_norm', _q(certificate.dual_sup_norm))
        report.add('value_label', LP_VALUE_LABEL)
        report.add_table('dual_cochain', certificate.rows())
        report.add_table('optimal_chain', certificate.optimal_chain.rows())
        if self.settings.lp_trace:
            report.add_table('pivots', _pivot_rows(certificate.pivots))

    def _cmd_fill(self, report: Report):
        z = self.workspace.chain(self._require(self.options.chain, '--chain')[0])
        support_name = self.options.collar or self.options.sub
        support = self._mask_on(z.complex, support_name) if support_name else None
        value, filling = self.minimizer.filling_min(z, support)
        report.add('complex', z.complex.name)
        report.add('support', support.name if support else '-')
        report.add('value', _q(value))
        report.add('value_label', LP_VALUE_LABEL)
        report.add_table('filling', filling.rows())

    def _cmd_epsnorm(self, report: Report):
        z = self._class_chain()
        sub = self._mask_on(z.complex, self._require(self.options.sub, '--sub'))
        relative = self._relative_pair(z.complex)
        results = self.minimizer.epsilon_tradeoff(
            z, self.settings.epsilon_schedule, sub, relative, self.settings.workers
        )
        report.add('complex', z.complex.name)
        report.add('sub', sub.name)
        report.add('value_label', LP_VALUE_LABEL)
        report.add_table('tradeoff', [
            {
                'epsilon': _q(r.epsilon),
                'value': _q(r.value),
                'chain_norm': _q(l1(r.chain)),
                'boundary_mass': _q(r.boundary_mass),
            }
            for r in results
        ])

    # ------------------------------------------------------------------
    # 正规形与覆叠
    # ------------------------------------------------------------------

    def _word(self) -> Tuple[GroupDatum, List[Syllable], str]:
        word = self._require(self.options.word, '--word')
        if word in self.workspace.words:
            datum_name, syllables = self.workspace.word(word)
            datum = self.workspace.datum(datum_name)
        else:
            datum = self.workspace.datum(self._require(self.options.datum, '--datum'))
            syllables = datum.parse_word(word.replace('.', ' ').split())
        return datum, syllables, ' '.join(datum.format_syllable(s) for s in syllables) or '1'

    def _cmd_nf(self, report: Report):
        datum, syllables, text = self._word()
        if len(syllables) > self.settings.max_word_length:
            raise CapExceededError(
                f"词长 {len(syllables)} 超过上限 {self.settings.max_word_length}"
            )
        nf = datum.reduce(syllables)
        canonical = datum.canonical(nf)
        passed = datum.check_invariants(canonical)
        report.status = _status(passed)
        report.add('datum', datum.name)
        report.add('input', text)
        report.add('normal_form', datum.format_element(nf))
        report.add('canonical_form', datum.format_element(canonical))
        report.add('syllable_length', str(datum.syllable_length(canonical)))
        report.add('word_length', str(datum.word_length(canonical)))
        report.add('is_identity', canonical.is_identity)
        report.add_table('syllables', [
            {'position': str(i), 'factor': tag, 'syllable': datum.format_syllable((tag, value))}
            for i, (tag, value) in enumerate(canonical.syllables, start=1)
        ])

    def _path_row(self, space: GluedSpace, i: int, j: int, path: MinimizingPath, bfs: int) -> Dict[str, str]:
        return {
            'pair': f"{i}-{j}",
            'length': str(len(path)),
            'bfs': str(bfs),
            'pattern': ' '.join(path.pattern) or '-',
            'fallback': 'yes' if path.fallback else 'no',
            'vertices': ' → '.join(space.format_vertex(x) for x in path.vertices),
        }

    def _cmd_paths(self, report: Report):
        space = self._space()
        vertices = [self._cover_vertex(space, text) for text in self._require(self.options.vertices, '--vertices')]
        if len(vertices) < 2:
            raise ValidationError("--vertices 至少需要两个覆叠顶点")

        rows = []
        chosen: Dict[Tuple[int, int], MinimizingPath] = {}
        minimal = True
        for i in range(len(vertices)):
            for j in range(i + 1, len(vertices)):
                paths = sorted(space.minimizing_paths(vertices[i], vertices[j]), key=space.path_key)
                bfs = space.bfs_distance(vertices[i], vertices[j])
                minimal = minimal and all(len(p) == bfs for p in paths)
                chosen[(i, j)] = paths[0]
                rows.extend(self._path_row(space, i, j, p, bfs) for p in paths)
        report.add('space', space.name)
        report.add('vertices', [space.format_vertex(x) for x in vertices])
        report.add_table('paths', rows)

        if len(vertices) >= 3:
            central = space.central_simplex(vertices, chosen)
            report.add('central_simplex', space.complex.label(central.simplex) if central.found else '-')
            report.add('central_sign', str(central.sign) if central.found else '0')
            report.add('central_tag', central.tag or '-')
            report.add('candidates_checked', str(central.candidates_checked))
        report.status = _status(minimal)

    # ------------------------------------------------------------------
    # 收缩与转移
    # ------------------------------------------------------------------

    def _cmd_retract(self, report: Report):
        space = self._space()
        retraction = Retraction(space, self.settings.workers)
        report.add('space', space.name)
        report.add('target', retraction.target.name)
        if self.options.simplex:
            simplex = self._glued_simplex(space.complex, self.options.simplex)
            result = retraction.retract_orbit(simplex)
            report.add('simplex', space.complex.label(simplex))
            report.add('result', retraction.format_result(result))
            report.add('orbit', retraction.target.label(result.simplex) if result else '0')
            report.add('sign', str(result.sign) if result else '0')
            report.add('tag', result.tag if result else '-')
            return
        z = self.workspace.chain(self._require(self.options.chain, '--simplex 或 --chain')[0])
        retracted = retraction.retract_chain(z, relative=self.options.relative is not None)
        report.add('chain_norm', _q(l1(z)))
        report.add('k_norm', _q(l1(retracted.k)))
        report.add_table('k_part', retracted.k.rows())
        if retracted.l is not None:
            report.add('l_norm', _q(l1(retracted.l)))
            report.add_table('l_part', retracted.l.rows())

    def _cmd_transfer(self, report: Report):
        space = self._space()
        retraction = Retraction(space, self.settings.workers)
        c1 = self.workspace.cochain(self._require(self.options.cochain, '--cochain'))
        c2 = self.workspace.cochain(self.options.cochain2) if self.options.cochain2 else None
        if self.options.degree is not None and self.options.degree != c1.dim:
            raise ValidationError(f"--degree {self.options.degree} 与上链次数 {c1.dim} 不符")
        relative = self.options.relative is not None
        c = retraction.transfer_cocycle(c1, c2, relative)

        delta = coboundary(c)
        if relative and space.relative is not None:
            cocycle = all(s in space.relative for s in delta.values)
        else:
            cocycle = delta.is_zero()
        bound = max(linf(c1), linf(c2) if c2 is not None else Fraction(0))
        report.status = _status(cocycle and linf(c) <= bound)
        report.add('space', space.name)
        report.add('degree', str(c.dim))
        report.add('input_sup_norm', _q(bound))
        report.add('sup_norm', _q(linf(c)))
        report.add('cocycle', cocycle)
        report.add_table('transferred', c.rows())

    # ------------------------------------------------------------------
    # 粘合构造
    # ------------------------------------------------------------------

    @staticmethod
    def _mask_euler(mask: SubcomplexMask) -> int:
        return sum((-1) ** s.dim for s in mask.members)

    def _cmd_glue(self, report: Report):
        name = self._require(self.options.glue, '--glue')
        result = self.workspace.glue(name)
        if 'K' not in result.masks:
            raise ValidationError(f"{name} 不是两复形粘合的结果")
        complex_ = result.complex
        k, l_, a = (result.masks[tag] for tag in ('K', 'L', 'A'))
        additive = complex_.euler_characteristic() == self._mask_euler(k) + self._mask_euler(l_) - self._mask_euler(a)
        report.add('complex', complex_.name)
        report.add('f_vector', [str(n) for n in complex_.f_vector()])
        report.add('euler_characteristic', str(complex_.euler_characteristic()))
        report.add('euler_additive', additive)
        report.add_table('masks', [
            {'mask': tag, 'simplices': str(len(result.masks[tag])), 'euler': str(self._mask_euler(result.masks[tag]))}
            for tag in ('K', 'L', 'A')
        ])
        passed = additive

        if self.options.chain:
            if len(self.options.chain) != 2:
                raise ValidationError("glue 的 --chain 需要两个链（分别在两个复形上）")
            z1, z2 = (self.workspace.chain(c) for c in self.options.chain)
            support = self._mask_on(complex_, self.options.collar) if self.options.collar else None
            z, c = glue_cycles(z1, z2, result, support)
            within = l1(z) <= l1(z1) + l1(z2) + l1(c)
            report.add('glued_norm', _q(l1(z)))
            report.add('correction_norm', _q(l1(c)))
            report.add('norm_bound', within)
            report.add_table('glued_chain', z.rows())
            report.add_table('correction', c.rows())
            passed = passed and within
        report.status = _status(passed)

    def _cmd_selfglue(self, report: Report):
        name = self._require(self.options.glue, '--glue')
        result = self.workspace.glue(name)
        if 'projection' not in result.maps:
            raise ValidationError(f"{name} 不是自粘合的结果")
        complex_ = result.complex
        names = complex_.vertex_names
        source = self.workspace.complex(self.workspace.glue_sources[name][0])
        report.add('complex', complex_.name)
        report.add('f_vector', [str(n) for n in complex_.f_vector()])
        report.add('euler_characteristic', str(complex_.euler_characteristic()))
        report.add('euler_with_loops', str(euler_characteristic_with_loops(result)))
        report.add('collapsed', str(len(result.collapsed)))
        report.add_table('loops', [
            {'vertex': names[w], 'edge': source.label(edge)} for w, edge in result.loops
        ])
        if self.options.chain:
            z = self.workspace.chain(self.options.chain[0])
            pushed = result.push(z, 'projection')
            report.add('pushed_norm', _q(l1(pushed)))
            report.add_table('pushed_chain', pushed.rows())

    def _cmd_double(self, report: Report):
        complex_ = self.workspace.complex(self._require(self.options.complex, '--complex'))
        boundary_mask = self._mask_on(complex_, self._require(self.options.sub, '--sub'))
        doubled = double(complex_, boundary_mask)
        report.add('complex', doubled.complex.name)
        report.add('f_vector', [str(n) for n in doubled.complex.f_vector()])
        report.add('euler_characteristic', str(doubled.complex.euler_characteristic()))
        if not self.options.chain and not self.options.class_name:
            return

        z = self._class_chain()
        dz = doubled.apply(z)
        is_cycle = dz.dim == 0 or boundary(dz).is_zero()
        exact_norm = l1(dz) == 2 * l1(z)
        report.add('chain_norm', _q(l1(z)))
        report.add('doubled_norm', _q(l1(dz)))
        report.add('doubled_is_cycle', is_cycle)
        report.add('norm_doubles', exact_norm)
        report.add_table('doubled_chain', dz.rows())
        passed = exact_norm

        relative = RelativePair(complex_, boundary_mask)
        if z.dim > 0 and is_cycle and is_relative_cycle(z, relative):
            relative_value, _ = self.minimizer.min_l1(z, relative)
            doubled_value, _ = self.minimizer.min_l1(dz)
            within = doubled_value <= 2 * relative_value
            report.add('relative_value', _q(relative_value))
            report.add('doubled_value', _q(doubled_value))
            report.add('value_label', LP_VALUE_LABEL)
            report.add('doubling_bound', within)
            passed = passed and within
        report.status = _status(passed)

    def _cmd_cut(self, report: Report):
        complex_ = self.workspace.complex(self._require(self.options.complex, '--complex'))
        f_mask = self._mask_on(complex_, self._require(self.options.sub, '--sub'))
        result = cut(complex_, f_mask)
        report.add('complex', result.complex.name)
        report.add('f_vector', [str(n) for n in result.complex.f_vector()])
        report.add('euler_characteristic', str(result.complex.euler_characteristic()))
        report.add('plus', str(len(result.plus)))
        report.add('minus', str(len(result.minus)))
        if self.options.glue:
            other = self.workspace.complex(self.options.glue)
            isomorphic = are_isomorphic(result.complex, other)
            report.add('isomorphic_to', other.name)
            report.add('isomorphic', isomorphic)
            report.status = _status(isomorphic)

    # ------------------------------------------------------------------
    # 平均
    # ------------------------------------------------------------------

    def _cmd_average(self, report: Report):
        action = self.workspace.action(self._require(self.options.action, '--action'))
        c = self.workspace.cochain(self._require(self.options.cochain, '--cochain'))
        averaged = average(c, action)
        contraction = linf(averaged) <= linf(c)
        fixed = not action.is_invariant(c) or averaged == c
        report.status = _status(contraction and fixed and action.is_invariant(averaged))
        report.add('action', action.name)
        report.add('group_order', str(len(action.elements())))
        report.add('input_sup_norm', _q(linf(c)))
        report.add('averaged_sup_norm', _q(linf(averaged)))
        report.add('input_invariant', action.is_invariant(c))
        report.add('averaged_invariant', action.is_invariant(averaged))
        report.add_table('averaged', averaged.rows())


def run(command: str, workspace: Workspace, settings: Optional[RunSettings] = None,
        options: Optional[CommandOptions] = None) -> Report:
    """执行单个命令并返回报告"""
    return CommandRunner(workspace, settings, options).run(command)
