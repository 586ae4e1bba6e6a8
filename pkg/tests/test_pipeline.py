import json
import shutil

import pytest

from testscribe.errors import BundleIncompleteError
from testscribe.gui_intent import Intent, IntentSource, load_gallery
from testscribe.pipeline import (PipelineConfig, aggregate, load_bundle,
                                 render_report, run_pipeline)
from testscribe.script_model import parse_script


def _intent(text):
    return Intent(0, IntentSource.GUI_TEXT, text, 1.0)


# --------------------------------------------------------------------------
# aggregation


def test_aggregate_keeps_nonconsecutive_duplicates():
    out = aggregate([_intent("Search"), None, _intent("Search")])
    assert out == "step 1: Search; step 2: (transition); step 3: Search"


def test_aggregate_collapses_consecutive_case_insensitive():
    assert aggregate([_intent("OK"), _intent("ok")]) == "step 1: OK"


def test_aggregate_empty():
    assert aggregate([]) == ""


def test_aggregate_transition_resets_dedup_window():
    out = aggregate([_intent("A"), _intent("a"), None, _intent("A")])
    assert out == "step 1: A; step 3: (transition); step 4: A"


# --------------------------------------------------------------------------
# bundle loading


def test_load_bundle(miniapp):
    bundle = load_bundle(miniapp / "bundle")
    assert sorted(bundle.entries) == [1, 2, 3, 4, 5]
    assert bundle.entries[1].widget_image is not None
    assert bundle.entries[2].widget_image is None
    assert bundle.entries[2].ocr is not None


def test_load_bundle_missing_file(miniapp, tmp_path):
    shutil.copytree(miniapp / "bundle", tmp_path / "bundle")
    (tmp_path / "bundle" / "op_003" / "layout.xml").unlink()
    with pytest.raises(BundleIncompleteError, match="op_003/layout.xml"):
        load_bundle(tmp_path / "bundle")


def test_load_bundle_requires_manifest(tmp_path):
    with pytest.raises(BundleIncompleteError):
        load_bundle(tmp_path)


def test_run_pipeline_rejects_uncovered_ops(miniapp, appsrc):
    script = parse_script(
        'driver.findElementById("a:id/x").click();' * 7, "seven.java")
    bundle = load_bundle(miniapp / "bundle")
    with pytest.raises(BundleIncompleteError):
        run_pipeline(script, bundle, appsrc)


# --------------------------------------------------------------------------
# full runs


@pytest.fixture(scope="module")
def miniapp_report(miniapp, appsrc, gallery_dir):
    script = parse_script(
        (miniapp / "SearchFlowTest.java").read_text(encoding="utf-8"),
        "SearchFlowTest.java")
    bundle = load_bundle(miniapp / "bundle")
    config = PipelineConfig(gallery=load_gallery(gallery_dir))
    return run_pipeline(script, bundle, appsrc, config)


def test_report_xpath_content_desc_route(miniapp_report):
    op1 = miniapp_report.per_op[0]
    assert op1.intents[0].text == "Search (magnifier icon, search)"
    assert op1.intents[0].confidence == 1.0
    assert op1.evidence["widget_match"]["content_desc"] == "Search"


def test_report_hierarchy_route_with_ocr(miniapp_report):
    op2 = miniapp_report.per_op[1]
    assert op2.intents[0].text == "City name"
    assert op2.intents[0].confidence == 0.8


def test_report_code_route(miniapp_report):
    op3 = miniapp_report.per_op[2]
    assert op3.intents[0].source is IntentSource.CODE
    assert op3.intents[0].text == "save note via insert"
    method = op3.evidence["response_method"]
    assert method["method_name"] == "saveNote"
    assert method["template"] == 1
    assert op3.paths, "code route should expose its AST paths"


def test_report_gui_fallback_route(miniapp_report):
    op4 = miniapp_report.per_op[3]
    assert op4.evidence.get("gui_fallback") is True
    assert op4.intents[0].text == "Settings"


def test_report_dedups_layout_and_ocr_text(miniapp_report):
    op5 = miniapp_report.per_op[4]
    assert op5.intents[0].text == "Done (checkmark icon, confirm)"


def test_report_stats_match_recount(miniapp_report):
    stats = miniapp_report.stats
    assert stats["total_ops"] == 5
    assert stats["mapped_ops"] \
        == sum(1 for r in miniapp_report.per_op if r.intents)
    assert stats["gui_count"] == 4
    assert stats["code_count"] == 1


def test_report_intent_indices_follow_ops(miniapp_report):
    for res in miniapp_report.per_op:
        for intent in res.intents:
            assert intent.op_index == res.op.index


def test_failures_degrade_to_unmapped(miniapp, appsrc, tmp_path):
    shutil.copytree(miniapp / "bundle", tmp_path / "bundle")
    # op 1's layout no longer contains the target widget
    (tmp_path / "bundle" / "op_001" / "layout.xml").write_text(
        "<hierarchy><android.widget.TextView text='x'/></hierarchy>",
        encoding="utf-8")
    script = parse_script(
        (miniapp / "SearchFlowTest.java").read_text(encoding="utf-8"),
        "SearchFlowTest.java")
    report = run_pipeline(script, load_bundle(tmp_path / "bundle"), appsrc)
    op1 = report.per_op[0]
    assert not op1.mapped
    assert op1.error
    assert report.has_errors
    assert report.stats["mapped_ops"] == 4
    assert report.script_intent.startswith("step 1: (transition)")


def test_gui_only_run_without_source_or_gallery(miniapp):
    script = parse_script(
        (miniapp / "SearchFlowTest.java").read_text(encoding="utf-8"),
        "SearchFlowTest.java")
    report = run_pipeline(script, load_bundle(miniapp / "bundle"), None)
    op1 = report.per_op[0]
    assert op1.intents[0].text == "Search"  # no gallery, no caption
    op3 = report.per_op[2]  # no source tree: falls back to layout text
    assert op3.evidence.get("gui_fallback") is True
    assert op3.intents[0].text == "Save"


def test_empty_script_report(miniapp):
    report = run_pipeline(parse_script("", "empty.java"),
                          load_bundle(miniapp / "bundle"), None)
    assert report.stats["total_ops"] == 0
    assert report.script_intent == ""
    rendered = json.loads(render_report(report))
    assert rendered["ops"] == []
    assert rendered["script_intent"] == ""


def test_render_json_deterministic(miniapp_report):
    assert render_report(miniapp_report) == render_report(miniapp_report)


def test_render_markdown_sections(miniapp_report):
    md = render_report(miniapp_report, "md")
    assert md.count("## Step") == 5
    assert "save note via insert" in md


def test_render_rejects_unknown_format(miniapp_report):
    with pytest.raises(ValueError):
        render_report(miniapp_report, "yaml")
