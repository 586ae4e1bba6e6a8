#!/usr/bin/env python3
"""Regenerate the committed test fixtures (gallery, mini-app bundle, sources).

Idempotent and fully deterministic; run from the repository root:
    python3 tools/make_fixtures.py
"""

import json
import sys
from pathlib import Path

import numpy as np
from PIL import Image

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "tests" / "fixtures"

sys.path.insert(0, str(REPO / "src"))
from testscribe.gui_intent import average_hash, hamming_distance  # noqa: E402


# --------------------------------------------------------------------------
# icons


def canvas(bg=235):
    return np.full((32, 32, 3), bg, dtype=np.uint8)


def draw_icons():
    icons = {}

    img = canvas()
    yy, xx = np.mgrid[0:32, 0:32]
    ring = np.abs(np.hypot(yy - 13, xx - 13) - 8) < 1.8
    img[ring] = 40
    for i in range(20, 30):
        img[i, i - 2:i + 1] = 40
    icons["magnifier"] = img

    img = canvas()
    for i in range(6):
        img[20 + i, 6 + i:8 + i] = 30
    for i in range(14):
        img[25 - i, 12 + i:14 + i] = 30
    icons["checkmark"] = img

    img = canvas()
    img[14:18, 4:28] = 50
    img[4:28, 14:18] = 50
    icons["plus"] = img

    img = canvas()
    ring = np.abs(np.hypot(yy - 16, xx - 16) - 9) < 2.5
    img[ring] = 60
    img[14:18, 2:7] = 60
    img[14:18, 25:30] = 60
    img[2:7, 14:18] = 60
    img[25:30, 14:18] = 60
    icons["gear"] = img

    img = canvas()
    img[10:28, 9:23] = 70
    img[6:9, 6:26] = 70
    img[12:26, 13:15] = 235
    img[12:26, 17:19] = 235
    icons["trash"] = img

    img = canvas()
    for i in range(10):
        img[16 - i, 6 + i:8 + i] = 45
        img[16 + i, 6 + i:8 + i] = 45
    img[15:18, 6:26] = 45
    icons["arrow_left"] = img

    img = canvas()
    for cy in (7, 16, 25):
        disk = np.hypot(yy - cy, xx - 16) < 3.2
        img[disk] = 35
    icons["menu_dots"] = img

    img = canvas()
    left = np.hypot(yy - 11, xx - 10) < 6
    right = np.hypot(yy - 11, xx - 22) < 6
    img[left | right] = 55
    for i in range(12):
        img[14 + i, 6 + i:27 - i] = 55
    icons["heart"] = img

    img = canvas()
    img[14:18, 4:28] = 65
    img[4:28, 14:18] = 65
    for i in range(10):
        img[8 + i, 8 + i:11 + i] = 65
        img[8 + i, 21 - i:24 - i] = 65
    icons["star"] = img

    img = canvas()
    for i in range(11):
        img[5 + i, 16 - i - 1:16 + i + 1] = 75
    img[16:28, 8:24] = 75
    img[20:28, 13:19] = 235
    icons["home"] = img

    img = canvas()
    for cy, cx in ((8, 24), (16, 7), (26, 24)):
        disk = np.hypot(yy - cy, xx - cx) < 3.5
        img[disk] = 45
    for t in np.linspace(0, 1, 60):
        r = int(8 + t * (16 - 8))
        c = int(24 + t * (7 - 24))
        img[r, c] = 45
        r = int(16 + t * (26 - 16))
        c = int(7 + t * (24 - 7))
        img[r, c] = 45
    icons["share"] = img

    img = canvas()
    img[10:26, 4:28] = 80
    img[6:10, 11:21] = 80
    lens = np.abs(np.hypot(yy - 18, xx - 16) - 5) < 1.6
    img[lens] = 235
    icons["camera"] = img

    return icons


GALLERY_CAPTIONS = {
    "magnifier": "magnifier icon, search",
    "checkmark": "checkmark icon, confirm",
    "plus": "plus icon, add item",
    "gear": "gear icon, open settings",
    "trash": "trash icon, delete",
    "arrow_left": "back arrow, navigate up",
    "menu_dots": "three dots, more options",
    "heart": "heart icon, favorite",
    "star": "star icon, rate",
    "home": "home icon, main screen",
    "share": "share icon, send to app",
    "camera": "camera icon, take photo",
}


def write_gallery():
    gallery_dir = FIXTURES / "gallery"
    gallery_dir.mkdir(parents=True, exist_ok=True)
    icons = draw_icons()
    rows = []
    for name in sorted(GALLERY_CAPTIONS):
        path = gallery_dir / f"{name}.png"
        Image.fromarray(icons[name]).save(path)
        rows.append(f"{name}\t{name}.png\t{GALLERY_CAPTIONS[name]}")
    (gallery_dir / "captions.tsv").write_text("\n".join(rows) + "\n",
                                              encoding="utf-8")
    return icons


def perturb(img: np.ndarray) -> np.ndarray:
    out = img.copy()
    out[0:2, 0:2] = 128  # corner smudge: small hash distance, not zero
    out[30:32, 30:32] = 128
    return out


# --------------------------------------------------------------------------
# mini-app trace bundle

OP1_LAYOUT = """<hierarchy rotation="0">
  <android.widget.FrameLayout bounds="[0,0][1080,1920]">
    <android.widget.TextView text="Weather" bounds="[40,80][400,200]"/>
    <android.widget.ImageButton content-desc="Search" bounds="[920,80][1040,200]"/>
  </android.widget.FrameLayout>
</hierarchy>
"""

OP2_LAYOUT = """<hierarchy rotation="0">
  <android.widget.FrameLayout bounds="[0,0][1080,1920]">
    <android.widget.LinearLayout bounds="[0,240][1080,640]">
      <android.widget.EditText bounds="[40,300][800,400]"/>
      <android.widget.EditText bounds="[40,420][800,520]"/>
    </android.widget.LinearLayout>
  </android.widget.FrameLayout>
</hierarchy>
"""

OP3_LAYOUT = """<hierarchy rotation="0">
  <android.widget.FrameLayout bounds="[0,0][1080,1920]">
    <android.widget.Button resource-id="com.example.app:id/btn_save" text="Save" bounds="[40,1700][520,1840]"/>
  </android.widget.FrameLayout>
</hierarchy>
"""

OP4_LAYOUT = """<hierarchy rotation="0">
  <android.widget.FrameLayout bounds="[0,0][1080,1920]">
    <android.widget.ImageView resource-id="com.example.app:id/unknown_button" text="Settings" bounds="[560,1700][1040,1840]"/>
  </android.widget.FrameLayout>
</hierarchy>
"""

OP5_LAYOUT = """<hierarchy rotation="0">
  <android.widget.FrameLayout bounds="[0,0][1080,1920]">
    <android.widget.Button text="Cancel" bounds="[40,1700][520,1840]"/>
    <android.widget.Button text="Done" bounds="[560,1700][1040,1840]"/>
  </android.widget.FrameLayout>
</hierarchy>
"""

OP2_OCR = [{"text": "City name", "box": [50, 330, 300, 380]},
           {"text": "Country", "box": [50, 450, 300, 500]}]
OP5_OCR = [{"text": "DONE", "box": [640, 1740, 900, 1800]},
           {"text": "Cancel", "box": [120, 1740, 380, 1800]}]

TEST_SCRIPT = '''import io.appium.java_client.android.AndroidDriver;

public class SearchFlowTest {

    private AndroidDriver driver;

    public void testSearchAndSaveFlow() {
        driver.findElementByXPath("//android.widget.ImageButton[@content-desc=\\"Search\\"]").click();
        driver.findElementByXPath("/hierarchy/android.widget.FrameLayout/android.widget.LinearLayout/android.widget.EditText[1]").sendKeys("Nanjing");
        driver.findElementById("com.example.app:id/btn_save").click();
        driver.findElementById("com.example.app:id/unknown_button").click();
        driver.findElementByXPath("/hierarchy/android.widget.FrameLayout/android.widget.Button[2]").click();
    }
}
'''


def write_miniapp(icons):
    mini = FIXTURES / "miniapp"
    bundle = mini / "bundle"
    ops = []
    layouts = [OP1_LAYOUT, OP2_LAYOUT, OP3_LAYOUT, OP4_LAYOUT, OP5_LAYOUT]
    widget_images = {1: perturb(icons["magnifier"]),
                     5: perturb(icons["checkmark"])}
    ocr = {2: OP2_OCR, 5: OP5_OCR}
    screenshot = np.full((16, 16, 3), 190, dtype=np.uint8)
    for i, layout in enumerate(layouts, 1):
        op_dir = bundle / f"op_{i:03d}"
        op_dir.mkdir(parents=True, exist_ok=True)
        Image.fromarray(screenshot).save(op_dir / "screenshot.png")
        (op_dir / "layout.xml").write_text(layout, encoding="utf-8")
        entry = {"index": i,
                 "screenshot": f"op_{i:03d}/screenshot.png",
                 "layout": f"op_{i:03d}/layout.xml"}
        if i in widget_images:
            Image.fromarray(widget_images[i]).save(op_dir / "widget.png")
            entry["widget_image"] = f"op_{i:03d}/widget.png"
        if i in ocr:
            (op_dir / "ocr.json").write_text(
                json.dumps(ocr[i], indent=1) + "\n", encoding="utf-8")
            entry["ocr"] = f"op_{i:03d}/ocr.json"
        ops.append(entry)
    (bundle / "manifest.json").write_text(
        json.dumps({"operations": ops}, indent=2) + "\n", encoding="utf-8")
    (mini / "SearchFlowTest.java").write_text(TEST_SCRIPT, encoding="utf-8")
    (mini / "references.txt").write_text(
        "step 1: search; step 2: type the city name; step 3: save the note; "
        "step 4: open settings; step 5: done, confirm\n", encoding="utf-8")

    # sanity: perturbed widgets must land on their gallery source, within 16
    gallery_hashes = {n: average_hash(FIXTURES / "gallery" / f"{n}.png")
                      for n in GALLERY_CAPTIONS}
    for i, source in ((1, "magnifier"), (5, "checkmark")):
        q = average_hash(bundle / f"op_{i:03d}" / "widget.png")
        dists = sorted((hamming_distance(q, h), n)
                       for n, h in gallery_hashes.items())
        assert dists[0][1] == source and dists[0][0] <= 16, (i, dists[:3])
        assert dists[0][0] < dists[1][0], (i, dists[:3])
        print(f"op{i} widget -> {dists[0][1]} at distance {dists[0][0]} "
              f"(runner-up {dists[1][1]} at {dists[1][0]})")


# --------------------------------------------------------------------------
# app source tree

SWITCH_ACTIVITY = '''package com.example.app;

import android.app.Activity;
import android.os.Bundle;
import android.view.View;

public class SwitchActivity extends Activity implements View.OnClickListener {

    private NoteStore noteStore;
    private Note currentNote;
    private View mainContainer;

    @Override
    protected void onCreate(Bundle savedInstanceState) {
        super.onCreate(savedInstanceState);
        setContentView(R.layout.activity_form);
        mainContainer = findViewById(R.id.main_container);
        noteStore = new NoteStore(this);
    }

    @Override
    public void onClick(View v) {
        switch (v.getId()) {
            case R.id.btn_save:
                saveNote();
                break;
            case R.id.btn_discard:
                discardNote();
                break;
            default:
                break;
        }
    }

    private void saveNote() {
        noteStore.insert(currentNote);
    }

    private void discardNote() {
        currentNote = null;
    }
}
'''

IF_ELSE_ACTIVITY = '''package com.example.app;

import android.app.Activity;
import android.view.View;

public class IfElseActivity extends Activity {

    private View mainContainer;

    public void handleClick(View view) {
        mainContainer = findViewById(R.id.main_container);
        if (view.getId() == R.id.btn_cancel) {
            dismissDialog();
        } else if (view.getId() == R.id.btn_retry) {
            retryUpload();
        }
    }

    private void dismissDialog() {
        dialog.dismiss();
    }

    private void retryUpload() {
        uploader.resume();
    }
}
'''

BINDING_ACTIVITY = '''package com.example.app;

import android.app.Activity;
import android.os.Bundle;
import android.view.View;
import android.widget.Button;
import butterknife.BindView;

public class BindingActivity extends Activity {

    @BindView(R.id.btn_share)
    Button shareButton;

    private View mainContainer;

    @Override
    protected void onCreate(Bundle savedInstanceState) {
        super.onCreate(savedInstanceState);
        mainContainer = findViewById(R.id.main_container);
        Button searchBtn = (Button) findViewById(R.id.btn_search);
        searchBtn.setOnClickListener(new View.OnClickListener() {
            @Override
            public void onClick(View v) {
                performSearch();
            }
        });
        shareButton.setOnClickListener(v -> shareItem(currentItem));
    }

    private void performSearch() {
        searchService.query(searchBox.getText());
    }

    private void shareItem(Item item) {
        shareService.send(item);
    }
}
'''

ANNOTATED_ACTIVITY = '''package com.example.app;

import android.app.Activity;
import android.view.View;
import butterknife.OnClick;

public class AnnotatedActivity extends Activity {

    private View mainContainer;

    void bindViews() {
        mainContainer = findViewById(R.id.main_container);
    }

    @OnClick(R.id.btn_like)
    public void likePost() {
        api.like(post);
        refreshLikeCount();
    }

    private void refreshLikeCount() {
        likeCounter.setText(api.count(post));
    }
}
'''

FORM_ACTIVITY = '''package com.example.app;

import android.app.Activity;
import android.view.View;

public class FormActivity extends Activity {

    private View mainContainer;

    void bindViews() {
        mainContainer = findViewById(R.id.main_container);
    }

    public void submitForm(View view) {
        validator.check(formData);
        formService.post(formData);
    }
}
'''

WEATHER_ACTIVITY = '''package com.example.app;

import android.app.Activity;
import android.os.Bundle;
import android.view.View;
import android.widget.EditText;

public class WeatherActivity extends Activity {

    private EditText citySearch;

    @Override
    protected void onCreate(Bundle savedInstanceState) {
        super.onCreate(savedInstanceState);
        setContentView(R.layout.activity_weather);
        citySearch = (EditText) findViewById(R.id.city_search);
        citySearch.setOnClickListener(new View.OnClickListener() {
            @Override
            public void onClick(View v) {
                openSearch(v);
            }
        });
    }

    public void openSearch(View view) {
        searchPanel.expand();
        loadCityList();
    }

    private void loadCityList() {
        cityAdapter.refresh();
    }
}
'''

NOTE_STORE = '''package com.example.app;

public class NoteStore {

    private final Database db;

    public NoteStore(Context context) {
        db = Database.open(context);
    }

    public void insert(Note note) {
        db.write(note);
    }
}
'''

FORM_LAYOUT = '''<?xml version="1.0" encoding="utf-8"?>
<LinearLayout xmlns:android="http://schemas.android.com/apk/res/android"
    android:id="@+id/main_container"
    android:orientation="vertical">

    <Button
        android:id="@+id/btn_submit"
        android:onClick="submitForm"
        android:text="Submit" />

    <Button
        android:id="@+id/btn_save"
        android:text="Save" />
</LinearLayout>
'''

WEATHER_LAYOUT = '''<?xml version="1.0" encoding="utf-8"?>
<LinearLayout xmlns:android="http://schemas.android.com/apk/res/android"
    android:orientation="vertical">

    <EditText
        android:id="@+id/city_search"
        android:onClick="openSearch"
        android:hint="City" />
</LinearLayout>
'''

APPSRC_FILES = {
    "app/src/main/java/com/example/app/SwitchActivity.java": SWITCH_ACTIVITY,
    "app/src/main/java/com/example/app/IfElseActivity.java": IF_ELSE_ACTIVITY,
    "app/src/main/java/com/example/app/BindingActivity.java": BINDING_ACTIVITY,
    "app/src/main/java/com/example/app/AnnotatedActivity.java":
        ANNOTATED_ACTIVITY,
    "app/src/main/java/com/example/app/FormActivity.java": FORM_ACTIVITY,
    "app/src/main/java/com/example/app/WeatherActivity.java":
        WEATHER_ACTIVITY,
    "app/src/main/java/com/example/app/NoteStore.java": NOTE_STORE,
    "app/src/main/res/layout/activity_form.xml": FORM_LAYOUT,
    "app/src/main/res/layout/activity_weather.xml": WEATHER_LAYOUT,
}

# expectations used by the localization tests (the oracle manifest)
APPSRC_MANIFEST = {
    "ids": {
        "btn_save": {"template": 1, "method": "saveNote",
                     "file": "app/src/main/java/com/example/app/"
                             "SwitchActivity.java"},
        "btn_cancel": {"template": 2, "method": "dismissDialog",
                       "file": "app/src/main/java/com/example/app/"
                               "IfElseActivity.java"},
        "btn_search": {"template": 3, "method": "performSearch",
                       "file": "app/src/main/java/com/example/app/"
                               "BindingActivity.java"},
        "btn_share": {"template": 3, "method": "shareItem",
                      "file": "app/src/main/java/com/example/app/"
                              "BindingActivity.java"},
        "btn_like": {"template": 4, "method": "likePost",
                     "file": "app/src/main/java/com/example/app/"
                             "AnnotatedActivity.java"},
        "btn_submit": {"template": 5, "method": "submitForm",
                       "file": "app/src/main/java/com/example/app/"
                               "FormActivity.java"},
        "city_search": {"template": 3, "method": "openSearch",
                        "file": "app/src/main/java/com/example/app/"
                                "WeatherActivity.java"},
    },
    "shared_id": "main_container",
    "shared_id_files": [
        "app/src/main/java/com/example/app/AnnotatedActivity.java",
        "app/src/main/java/com/example/app/BindingActivity.java",
        "app/src/main/java/com/example/app/FormActivity.java",
        "app/src/main/java/com/example/app/IfElseActivity.java",
        "app/src/main/java/com/example/app/SwitchActivity.java",
        "app/src/main/res/layout/activity_form.xml",
    ],
}


def write_appsrc():
    root = FIXTURES / "appsrc"
    for rel, content in APPSRC_FILES.items():
        path = root / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(content, encoding="utf-8")
    (FIXTURES / "appsrc_manifest.json").write_text(
        json.dumps(APPSRC_MANIFEST, indent=2) + "\n", encoding="utf-8")


# --------------------------------------------------------------------------
# comment-ratio boundary fixtures


def write_ratio_fixtures():
    root = FIXTURES / "ratios"
    root.mkdir(parents=True, exist_ok=True)
    code = [f"int v{i} = {i};" for i in range(10)]
    (root / "UncommentedTest.java").write_text(
        "\n".join(code) + "\n", encoding="utf-8")
    (root / "CommentedTest.java").write_text(
        "\n".join(["// step one", "// step two", "// step three"] + code)
        + "\n", encoding="utf-8")
    (root / "WellCommentedTest.java").write_text(
        "\n".join(["// step one", "// step two", "// step three",
                   "// step four"] + code) + "\n", encoding="utf-8")


def main():
    icons = write_gallery()
    write_miniapp(icons)
    write_appsrc()
    write_ratio_fixtures()
    print("fixtures written under", FIXTURES)


if __name__ == "__main__":
    main()
