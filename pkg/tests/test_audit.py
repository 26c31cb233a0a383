import pytest

from hdbsm.audit import audit_reference_table, load_reference_table
from hdbsm.states import BellIndex, LITERAL_CONVENTION, REFERENCE_CONVENTION


class TestTranscriptions:
    def test_d3_shape(self):
        rows = load_reference_table(3)
        assert len(rows) == 9
        assert all(len(pairs) == 9 for pairs in rows.values())

    def test_d4_shape(self):
        rows = load_reference_table(4)
        assert list(rows) == [BellIndex(2, 3)]
        assert len(rows[BellIndex(2, 3)]) == 16

    def test_unknown_dimension(self):
        with pytest.raises(ValueError):
            load_reference_table(5)

    def test_known_misprints_preserved(self):
        rows = load_reference_table(3)
        row_01 = rows[BellIndex(0, 1)]
        assert row_01.count((2, 1, 0, 0)) == 2
        row_22 = rows[BellIndex(2, 2)]
        assert (1, 2, 2, 1) in row_22 and (2, 2, 2, 1) in row_22


@pytest.fixture(scope="module")
def reference_audit():
    return audit_reference_table(3, REFERENCE_CONVENTION)


@pytest.fixture(scope="module")
def literal_audit():
    return audit_reference_table(3, LITERAL_CONVENTION)


class TestAuditUnderReferenceConvention:
    @pytest.fixture
    def audit(self, reference_audit):
        return reference_audit

    def test_totals(self, audit):
        assert audit.total_matches == 78
        assert audit.total_mismatches == 3
        assert not audit.clean

    def test_origin_row_clean(self, audit):
        row = audit.row(0, 0)
        assert len(row.matches) == 9
        assert row.clean

    def test_duplicated_print_in_row_01(self, audit):
        row = audit.row(0, 1)
        assert row.duplicates == ((2, 1, 0, 0),)
        assert len(row.matches) == 7
        # both printed occurrences of the duplicate disagree with the
        # computed pair for Bob index (2, 1)
        assert row.mismatches == (
            ((2, 1, 0, 0), (2, 1, 1, 2)),
            ((2, 1, 0, 0), (2, 1, 1, 2)),
        )
        assert set(row.missing) == {(0, 2, 0, 0), (2, 2, 1, 0)}
        assert (2, 1) in row.repeated_bob

    def test_repeated_alice_factor_in_row_22(self, audit):
        row = audit.row(2, 2)
        assert len(row.matches) == 8
        assert row.mismatches == (((1, 2, 2, 1), (1, 2, 0, 1)),)
        assert row.missing == ((1, 2, 0, 1),)
        assert row.repeated_alice == ((2, 1),)
        assert row.duplicates == ()

    def test_every_printed_pair_covered_exactly_once(self, audit):
        for row in audit.rows:
            assert len(row.matches) + len(row.mismatches) == len(row.printed)

    def test_global_duplicates_listing(self, audit):
        assert audit.duplicates == ((BellIndex(0, 1), (2, 1, 0, 0)),)


class TestAuditUnderLiteralConvention:
    @pytest.fixture
    def audit(self, literal_audit):
        return literal_audit

    def test_totals(self, audit):
        # rows with i = 0 follow the same law under both conventions, so only
        # the transcription misprints reduce their matches; rows with i != 0
        # disagree everywhere
        assert audit.total_matches == 25
        assert audit.total_mismatches == 56

    def test_origin_row_agrees_with_both_conventions(self, audit):
        assert audit.row(0, 0).clean

    def test_duplicate_still_reported(self, audit):
        assert audit.row(0, 1).duplicates == ((2, 1, 0, 0),)

    def test_nonzero_phase_rows_all_mismatch(self, audit):
        for i in (1, 2):
            for j in range(3):
                assert len(audit.row(i, j).mismatches) == 9


class TestAuditD4:
    def test_internally_consistent(self):
        audit = audit_reference_table(4, REFERENCE_CONVENTION)
        assert audit.total_matches == 16
        assert audit.total_mismatches == 0
        assert audit.clean

    def test_listing_matches_reference_law_exactly(self):
        from hdbsm.decomposition import reference_index_law

        law = reference_index_law(4)
        rows = load_reference_table(4)
        for (k, m, kp, mp) in rows[BellIndex(2, 3)]:
            assert kp == law.alice_k(k, 2)
            assert mp == law.alice_m(m, 3)
