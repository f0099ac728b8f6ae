#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
命令行测试
"""

import json

import pytest

import main
from src.utils.constants import EXIT_ERROR, EXIT_INCONCLUSIVE, EXIT_OK
from tests.conftest import corpus_file


def run_cli(capsys, *argv):
    """运行命令行，返回 (退出码, 标准输出, 标准错误)"""
    code = main.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def structured(capsys, *argv):
    code, out, _ = run_cli(capsys, *argv, '--format', 'structured')
    assert code == EXIT_OK
    return json.loads(out)


class TestCheckCommand:
    """测试 check 命令"""

    def test_sphere_passes(self, capsys):
        data = structured(capsys, 'check', corpus_file('sphere.mcx'), '--complex', 'dS3')
        assert data['status'] == 'PASS'
        assert data['fields']['f_vector'] == ['4', '6', '4']
        assert data['fields']['euler_characteristic'] == '2'

    def test_parallel_triangles_fail_but_exit_zero(self, capsys):
        code, out, _ = run_cli(capsys, 'check', corpus_file('sphere.mcx'), '--complex', 'twoparallel')
        assert code == EXIT_OK
        assert 'status: FAIL' in out

    def test_action_check(self, capsys):
        data = structured(capsys, 'check', corpus_file('sphere.mcx'), '--action', 'swap')
        assert data['tables']['checks'][0]['status'] == 'PASS'

    def test_explicit_action_discrepancy_row(self, capsys):
        data = structured(capsys, 'check', corpus_file('wedge.mcx'), '--space', 'WS')
        rows = {row['check']: row for row in data['tables']['checks']}
        assert rows['orbit_modes']['status'] == 'FAIL'
        assert 'tk' in rows['orbit_modes']['details']
        assert data['status'] == 'FAIL'

    def test_needs_a_selector(self, capsys):
        code, _, err = run_cli(capsys, 'check', corpus_file('sphere.mcx'))
        assert code == EXIT_ERROR
        assert err.startswith('ERROR')


class TestNormCommands:
    """测试范数相关命令"""

    def test_norm_text_output(self, capsys):
        code, out, _ = run_cli(capsys, 'norm', corpus_file('sphere.mcx'), '--class', 'fund')
        assert code == EXIT_OK
        assert 'value: 4/1' in out
        assert 'value_label: fixed-complex upper bound' in out
        assert '[representative]' in out

    def test_norm_structured(self, capsys):
        data = structured(capsys, 'norm', corpus_file('sphere.mcx'), '--class', 'twice')
        assert data['command'] == 'norm'
        assert data['status'] == 'OK'
        assert data['fields']['value'] == '8/1'
        assert data['fields']['input_norm'] == '8/1'

    def test_lp_trace_adds_pivots(self, capsys):
        data = structured(capsys, 'norm', corpus_file('sphere.mcx'), '--class', 'fund', '--lp-trace')
        assert 'pivots' in data['tables']

    def test_certificate(self, capsys):
        data = structured(capsys, 'certificate', corpus_file('sphere.mcx'), '--class', 'fund')
        assert data['fields']['primal_value'] == '4/1'
        assert data['fields']['dual_value'] == '4/1'
        assert data['fields']['dual_sup_norm'] == '1/1'

    def test_epsilon_schedule_keeps_order(self, capsys):
        data = structured(
            capsys, 'epsnorm', corpus_file('sphere.mcx'), '--class', 'fund', '--sub', 'disk',
            '--epsilon', '1,0',
        )
        assert [row['epsilon'] for row in data['tables']['tradeoff']] == ['1/1', '0/1']

    def test_output_is_deterministic(self, capsys):
        argv = ('norm', corpus_file('sphere.mcx'), '--class', 'fund', '--format', 'structured')
        _, first, _ = run_cli(capsys, *argv)
        _, second, _ = run_cli(capsys, *argv)
        assert first == second


class TestWordAndCoverCommands:
    """测试正规形、最短路径与收缩命令"""

    def test_nf(self, capsys):
        data = structured(capsys, 'nf', corpus_file('words.mcx'), '--word', 'cancel')
        assert data['status'] == 'PASS'
        assert data['fields']['normal_form'] == 'K:xx'
        assert data['fields']['syllable_length'] == '1'

    def test_nf_inline_word(self, capsys):
        data = structured(capsys, 'nf', corpus_file('words.mcx'), '--datum', 'Z3', '--word', 'K:x.K:X')
        assert data['fields']['is_identity'] is True

    def test_word_length_cap(self, capsys):
        code, out, err = run_cli(
            capsys, 'nf', corpus_file('words.mcx'), '--word', 'cancel', '--max-word-length', '2'
        )
        assert code == EXIT_INCONCLUSIVE
        assert out == ''
        assert err.startswith('INCONCLUSIVE')

    def test_paths(self, capsys):
        data = structured(capsys, 'paths', corpus_file('circle_amalgam.mcx'), '--space', 'R', '--vertices', 'k', 'l')
        assert data['status'] == 'PASS'
        rows = data['tables']['paths']
        assert len(rows) == 3
        assert {row['length'] for row in rows} == {'2'}
        assert {row['fallback'] for row in rows} == {'no'}

    def test_path_cap_is_inconclusive(self, capsys):
        code, _, _ = run_cli(
            capsys, 'paths', corpus_file('circle_amalgam.mcx'), '--space', 'R', '--vertices', 'k', 'l',
            '--max-paths', '2',
        )
        assert code == EXIT_INCONCLUSIVE

    def test_retract_simplex(self, capsys):
        data = structured(capsys, 'retract', corpus_file('wedge.mcx'), '--space', 'W', '--simplex', 's7')
        assert data['fields']['result'] == '+tk [K]'
        assert data['fields']['tag'] == 'K'


class TestGlueCommands:
    """测试粘合构造命令"""

    def test_glue_with_chains(self, capsys):
        data = structured(capsys, 'glue', corpus_file('gluing.mcx'), '--glue', 'loop2', '--chain', 'z1', 'z2')
        assert data['status'] == 'PASS'
        assert data['fields']['glued_norm'] == '2/1'
        assert data['fields']['correction_norm'] == '0/1'

    def test_double_disk(self, capsys):
        data = structured(
            capsys, 'double', corpus_file('gluing.mcx'), '--complex', 'tri1', '--sub', 'rim', '--chain', 'disk'
        )
        assert data['status'] == 'PASS'
        assert data['fields']['doubled_norm'] == '2/1'
        assert data['fields']['relative_value'] == '1/1'
        assert data['fields']['doubled_value'] == '2/1'

    def test_cut_circle(self, capsys):
        data = structured(
            capsys, 'cut', corpus_file('gluing.mcx'), '--complex', 'circle', '--sub', 'F', '--glue', 'path4'
        )
        assert data['status'] == 'PASS'
        assert data['fields']['isomorphic'] is True


class TestErrorsAndProfiles:
    """测试错误退出码与配置档"""

    def test_missing_file(self, capsys, temp_directory):
        code, out, err = run_cli(capsys, 'check', str(temp_directory / 'missing.mcx'), '--complex', 'x')
        assert code == EXIT_ERROR
        assert out == ''
        assert 'ERROR' in err

    def test_unknown_chain(self, capsys):
        code, _, _ = run_cli(capsys, 'norm', corpus_file('sphere.mcx'), '--class', 'nothing')
        assert code == EXIT_ERROR

    def test_profile_sets_format(self, capsys, temp_directory):
        profile = temp_directory / 'structured.json'
        profile.write_text(json.dumps({'format': 'structured'}), encoding='utf-8')
        code, out, _ = run_cli(
            capsys, 'norm', corpus_file('sphere.mcx'), '--class', 'fund', '--profile', str(profile)
        )
        assert code == EXIT_OK
        assert json.loads(out)['fields']['value'] == '4/1'

    def test_explicit_flag_overrides_profile(self, capsys, temp_directory):
        profile = temp_directory / 'structured.json'
        profile.write_text(json.dumps({'format': 'structured'}), encoding='utf-8')
        code, out, _ = run_cli(
            capsys, 'norm', corpus_file('sphere.mcx'), '--class', 'fund', '--profile', str(profile),
            '--format', 'text',
        )
        assert code == EXIT_OK
        assert out.startswith('command: norm')

    def test_invalid_profile(self, capsys, temp_directory):
        profile = temp_directory / 'bad.json'
        profile.write_text(json.dumps({'max_paths': -1}), encoding='utf-8')
        code, _, _ = run_cli(capsys, 'norm', corpus_file('sphere.mcx'), '--class', 'fund', '--profile', str(profile))
        assert code == EXIT_ERROR


if __name__ == "__main__":
    pytest.main([__file__])
