#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mlguard {

struct CsvError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// Streaming single-pass CSV reader: comma separated, double-quoted fields
// with "" escapes, quoted fields may span lines, CRLF tolerated. The first
// record is the header; every record must match its width.
inline Table read_csv(std::string_view text) {
    Table table;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t record_number = 1;  // 1-based, header included

    auto push_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto push_record = [&] {
        push_field();
        if (table.header.empty()) {
            table.header = std::move(record);
        } else {
            if (record.size() != table.header.size())
                throw CsvError("row " + std::to_string(record_number) +
                               " has " + std::to_string(record.size()) +
                               " fields, expected " +
                               std::to_string(table.header.size()));
            table.rows.push_back(std::move(record));
        }
        record.clear();
        ++record_number;
    };

    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    i += 2;
                    continue;
                }
                in_quotes = false;
                ++i;
                continue;
            }
            field += c;
            ++i;
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                field_started = true;
                ++i;
                break;
            case ',':
                push_field();
                field_started = true;  // next field exists even if empty
                ++i;
                break;
            case '\r':
                ++i;
                break;
            case '\n':
                push_record();
                ++i;
                break;
            default:
                field += c;
                field_started = true;
                ++i;
        }
    }
    if (in_quotes) throw CsvError("unterminated quoted field");
    if (!field.empty() || field_started || !record.empty()) push_record();

    if (table.header.empty())
        throw CsvError("empty input: no header row");
    return table;
}

}  // namespace mlguard
