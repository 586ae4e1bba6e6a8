package com.example.app;

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
