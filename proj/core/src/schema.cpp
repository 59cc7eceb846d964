#include "horndelta/schema.hpp"

#include "horndelta/errors.hpp"
#include "horndelta/tsv.hpp"

namespace horndelta {

PredicateSchema parse_schema(std::istream& in, Dictionary& dict) {
    PredicateSchema schema;
    for_each_data_line(in, [&](std::size_t line, std::string_view text) {
        auto fields = split_tabs(text);
        if (fields.size() != 3) {
            throw ParseError(line, "expected 3 tab-separated fields, got " +
                                       std::to_string(fields.size()));
        }
        for (auto f : fields) {
            if (f.empty()) throw ParseError(line, "empty field");
        }
        TermId pred = dict.intern(fields[0]);
        PredicateTypes types{schema.intern_type(fields[1]), schema.intern_type(fields[2])};
        if (const PredicateTypes* existing = schema.find(pred)) {
            if (!(*existing == types)) {
                throw ParseError(line, "conflicting types for predicate '" +
                                           std::string(fields[0]) + "'");
            }
            return;
        }
        schema.set(pred, types);
    });
    return schema;
}

}  // namespace horndelta
