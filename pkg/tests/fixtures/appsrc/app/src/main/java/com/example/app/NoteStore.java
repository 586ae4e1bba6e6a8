package com.example.app;

public class NoteStore {

    private final Database db;

    public NoteStore(Context context) {
        db = Database.open(context);
    }

    public void insert(Note note) {
        db.write(note);
    }
}
