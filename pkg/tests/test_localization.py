import itertools
import json
import random

import pytest

from testscribe.localization import (ResponseMethod, Template,
                                     find_candidate_files, inline_nested,
                                     localize_id, match_templates, prioritize,
                                     resolve_layout_handler, slice_lines)

SWITCH_SRC = """public class A {
    public void onClick(View v) {
        switch (v.getId()) {
            case R.id.btn_save:
                saveNote();
                break;
            case R.id.btn_open:
                openNote();
                return;
        }
    }
}
"""


def test_switch_template_single_call():
    (m,) = match_templates(SWITCH_SRC, "btn_save", file="A.java")
    assert m.template is Template.SWITCH
    assert m.method_name == "saveNote"
    assert "saveNote();" in m.snippet
    assert "openNote" not in m.snippet


def test_switch_return_terminated_arm():
    (m,) = match_templates(SWITCH_SRC, "btn_open", file="A.java")
    assert m.template is Template.SWITCH
    assert "openNote();" in m.snippet
    assert "return;" in m.snippet


def test_switch_multi_statement_body_gets_synthetic_name():
    src = """switch (v.getId()) {
        case R.id.btn_sync:
            spinner.show();
            syncService.start();
            break;
    }
    """
    (m,) = match_templates(src, "btn_sync", file="A.java")
    assert m.method_name == "case_btn_sync"
    assert "spinner.show();" in m.snippet
    assert "syncService.start();" in m.snippet


def test_if_else_template():
    src = """void handle(View view) {
        if (view.getId() == R.id.btn_cancel) {
            dismissDialog();
        }
    }
    """
    (m,) = match_templates(src, "btn_cancel", file="B.java")
    assert m.template is Template.IF_ELSE
    assert m.method_name == "dismissDialog"


def test_if_else_reversed_comparison_and_single_statement():
    src = "void f(View v) { if (R.id.btn_x == v.getId()) doThing(v); }"
    (m,) = match_templates(src, "btn_x", file="B.java")
    assert m.template is Template.IF_ELSE
    assert m.method_name == "doThing"


def test_id_binding_anonymous_listener():
    src = """void setup() {
        Button b = (Button) findViewById(R.id.btn_search);
        b.setOnClickListener(new View.OnClickListener() {
            @Override
            public void onClick(View v) {
                performSearch();
            }
        });
    }
    """
    (m,) = match_templates(src, "btn_search", file="C.java")
    assert m.template is Template.ID_BINDING
    assert m.method_name == "performSearch"


def test_id_binding_lambda_listener():
    src = """void setup() {
        saveBtn = findViewById(R.id.btn_save);
        saveBtn.setOnLongClickListener(v -> store.persist(v));
    }
    """
    (m,) = match_templates(src, "btn_save", file="C.java")
    assert m.template is Template.ID_BINDING
    assert m.method_name == "persist"


def test_bind_view_annotation_binding():
    src = """public class C {
        @BindView(R.id.btn_share)
        Button shareButton;

        void setup() {
            shareButton.setOnClickListener(v -> shareItem(item));
        }
    }
    """
    (m,) = match_templates(src, "btn_share", file="C.java")
    assert m.template is Template.ID_BINDING
    assert m.method_name == "shareItem"


def test_binding_without_listener_is_not_a_match():
    src = "View root = findViewById(R.id.main_container);"
    assert match_templates(src, "main_container", file="C.java") == []


def test_on_click_annotation_template():
    src = """public class D {
        @OnClick(R.id.btn_like)
        public void likePost() {
            api.like(post);
        }
    }
    """
    (m,) = match_templates(src, "btn_like", file="D.java")
    assert m.template is Template.ON_CLICK_ANNOTATION
    assert m.method_name == "likePost"
    assert "public void likePost()" in m.snippet


def test_layout_attribute_template():
    xml = """<LinearLayout>
        <Button
            android:id="@+id/btn_submit"
            android:onClick="submitForm"
            android:text="Submit" />
    </LinearLayout>
    """
    (m,) = match_templates(xml, "btn_submit", file="res/layout/form.xml")
    assert m.template is Template.LAYOUT_ATTRIBUTE
    assert m.method_name == "submitForm"


def test_id_only_in_comment_matches_nothing():
    src = """void f() {
        // case R.id.btn_ghost: launchGhost(); break;
        /* if (v.getId() == R.id.btn_ghost) haunt(); */
    }
    """
    assert match_templates(src, "btn_ghost", file="E.java") == []


def test_snippets_are_verbatim_line_slices(appsrc, appsrc_manifest):
    for wid, exp in appsrc_manifest["ids"].items():
        rm = localize_id(appsrc, wid)
        file_text = (appsrc / rm.file).read_text(encoding="utf-8")
        assert slice_lines(file_text, *rm.span) == rm.snippet, wid


# --------------------------------------------------------------------------
# candidate files


def test_find_candidate_files_single_hit(tmp_path):
    f = tmp_path / "A.java"
    f.write_text("int x = R.id.btn_search;", encoding="utf-8")
    (tmp_path / "B.java").write_text("int y;", encoding="utf-8")
    assert [p.as_posix() for p in
            find_candidate_files(tmp_path, "btn_search")] == ["A.java"]


def test_find_candidate_files_requires_token_boundary(tmp_path):
    (tmp_path / "A.java").write_text("use(R.id.btn_search_wide);",
                                     encoding="utf-8")
    assert find_candidate_files(tmp_path, "btn_search") == []


def test_find_candidate_files_absent_id(appsrc):
    assert find_candidate_files(appsrc, "no_such_id_anywhere") == []


def test_find_candidate_files_matches_manifest(appsrc, appsrc_manifest):
    files = find_candidate_files(appsrc, appsrc_manifest["shared_id"])
    assert [p.as_posix() for p in files] == appsrc_manifest["shared_id_files"]


# --------------------------------------------------------------------------
# prioritization


def _rm(template, file="A.java", line=1):
    return ResponseMethod(file, "m", "x();", Template(template), (line, line))


def test_prioritize_binding_beats_layout():
    best = prioritize([_rm(5), _rm(3)])
    assert best.template is Template.ID_BINDING


def test_prioritize_order_is_total():
    matches = [_rm(1), _rm(2), _rm(3), _rm(4), _rm(5)]
    for perm in itertools.permutations(matches):
        assert prioritize(list(perm)) is matches[2]


def test_prioritize_tie_breaks_by_file_then_line():
    a = _rm(1, "b.java", 10)
    b = _rm(1, "a.java", 20)
    c = _rm(1, "a.java", 5)
    assert prioritize([a, b, c]) is c


def test_prioritize_empty_and_singleton():
    assert prioritize([]) is None
    only = _rm(4)
    assert prioritize([only]) is only


def test_localization_fixture_corpus(appsrc, appsrc_manifest):
    for wid, exp in appsrc_manifest["ids"].items():
        rm = localize_id(appsrc, wid)
        assert rm is not None, wid
        assert int(rm.template) == exp["template"], wid
        assert rm.method_name == exp["method"], wid
        assert rm.file == exp["file"], wid


def test_conflict_prefers_binding_over_layout(appsrc):
    rm = localize_id(appsrc, "city_search")
    assert rm.template is Template.ID_BINDING


def test_layout_handler_resolution_swaps_to_activity_source(appsrc):
    xml = (appsrc / "app/src/main/res/layout/activity_form.xml")\
        .read_text(encoding="utf-8")
    (m,) = match_templates(xml, "btn_submit",
                           file="app/src/main/res/layout/activity_form.xml")
    resolved = resolve_layout_handler(m, appsrc)
    assert resolved.file.endswith("FormActivity.java")
    assert "formService.post(formData);" in resolved.snippet


def test_localize_unknown_id_returns_none(appsrc):
    assert localize_id(appsrc, "btn_missing") is None


# --------------------------------------------------------------------------
# nested inlining


def test_inline_single_substitution(appsrc):
    rm = localize_id(appsrc, "btn_save")
    inlined = inline_nested(rm, appsrc, max_depth=1)
    assert "noteStore.insert(currentNote);" in inlined.snippet


def test_inline_depth_zero_is_identity(appsrc):
    rm = localize_id(appsrc, "btn_save")
    assert inline_nested(rm, appsrc, max_depth=0) is rm


def test_inline_unresolvable_callees_stay(appsrc):
    rm = localize_id(appsrc, "btn_cancel")
    inlined = inline_nested(rm, appsrc, max_depth=2)
    # dialog.dismiss() is not defined in the tree; the call survives
    assert "dismiss" in inlined.snippet


def test_inline_mutual_recursion_terminates(tmp_path):
    (tmp_path / "M.java").write_text("""
        class M {
            void a() { b(); mark_a(); }
            void b() { a(); mark_b(); }
        }
    """, encoding="utf-8")
    rm = ResponseMethod("M.java", "go", "a();", Template.SWITCH, (1, 1))
    inlined = inline_nested(rm, tmp_path, max_depth=5)
    assert "mark_a" in inlined.snippet
    assert "mark_b" in inlined.snippet
    # each body appears exactly once despite depth 5
    assert inlined.snippet.count("mark_a") == 1
    assert inlined.snippet.count("mark_b") == 1


def test_inline_growth_is_bounded(tmp_path):
    methods = "\n".join(
        f"void m{i}() {{ m{(i + 1) % 6}(); pad_{i}(); }}" for i in range(6))
    (tmp_path / "Chain.java").write_text(f"class C {{ {methods} }}",
                                         encoding="utf-8")
    rm = ResponseMethod("C.java", "go", "m0();", Template.SWITCH, (1, 1))
    inlined = inline_nested(rm, tmp_path, max_depth=50)
    for i in range(6):
        assert inlined.snippet.count(f"pad_{i}") <= 1
