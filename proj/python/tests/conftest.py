import sqlite3

import pytest


@pytest.fixture
def ocel_log(tmp_path):
    """A two-order OCEL 2.0 log with one dangling object reference."""
    path = tmp_path / "orders.sqlite"
    db = sqlite3.connect(path)
    db.executescript(
        """
        CREATE TABLE event (ocel_id TEXT PRIMARY KEY, ocel_type TEXT);
        CREATE TABLE object (ocel_id TEXT PRIMARY KEY, ocel_type TEXT);
        CREATE TABLE event_map_type (ocel_type TEXT PRIMARY KEY, ocel_type_map TEXT);
        CREATE TABLE object_map_type (ocel_type TEXT PRIMARY KEY, ocel_type_map TEXT);
        CREATE TABLE event_object (ocel_event_id TEXT, ocel_object_id TEXT, ocel_qualifier TEXT);
        CREATE TABLE object_object (ocel_source_id TEXT, ocel_target_id TEXT, ocel_qualifier TEXT);
        CREATE TABLE event_place (ocel_id TEXT, ocel_time TIMESTAMP, channel TEXT);
        CREATE TABLE event_ship (ocel_id TEXT, ocel_time TIMESTAMP);
        CREATE TABLE object_order (ocel_id TEXT, ocel_time TIMESTAMP, ocel_changed_field TEXT, status TEXT);
        CREATE TABLE object_item (ocel_id TEXT, ocel_time TIMESTAMP, ocel_changed_field TEXT);
        INSERT INTO event_map_type VALUES ('place order', 'place'), ('ship', 'ship');
        INSERT INTO object_map_type VALUES ('order', 'order'), ('item', 'item');
        INSERT INTO event VALUES ('e1', 'place order'), ('e2', 'ship'), ('e3', 'place order');
        INSERT INTO object VALUES ('o1', 'order'), ('o2', 'order'), ('i1', 'item');
        INSERT INTO event_place VALUES ('e1', '2024-01-01 10:00:00', 'web'), ('e3', '2024-01-02 09:00:00', 'shop');
        INSERT INTO event_ship VALUES ('e2', '2024-01-01 15:00:00');
        INSERT INTO object_order VALUES ('o1', '1970-01-01 00:00:00', NULL, 'open'),
                                        ('o1', '2024-01-01 15:00:00', 'status', 'shipped'),
                                        ('o2', '1970-01-01 00:00:00', NULL, 'open');
        INSERT INTO event_object VALUES ('e1', 'o1', 'order'), ('e1', 'i1', 'item'),
                                        ('e2', 'o1', 'order'), ('e3', 'o2', 'order'), ('e3', 'ghost', 'item');
        INSERT INTO object_object VALUES ('o1', 'i1', 'contains');
        """
    )
    db.commit()
    db.close()
    return path
