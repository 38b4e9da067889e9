#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tpsqli/url.hpp"

namespace tpsqli {

struct FormField {
    std::string name;
    std::string value;
};

struct FormInfo {
    std::string action;  // raw attribute value; resolve against the page URL
    Method method = Method::GET;
    std::vector<FormField> fields;  // document order
};

// Href values of every <a> tag, in document order, raw (not resolved).
std::vector<std::string> extract_links(std::string_view html);

// Forms with their input/select/textarea field names and default values.
std::vector<FormInfo> extract_forms(std::string_view html);

}  // namespace tpsqli
