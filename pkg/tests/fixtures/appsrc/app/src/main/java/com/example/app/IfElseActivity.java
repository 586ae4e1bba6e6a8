package com.example.app;

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
