#pragma once
// Long-format CSV ingestion and emission: header `id,time,y,x1[,x2,...]`,
// rows sortable by (id, time), missing cells forbidden.

#include <iosfwd>
#include <string>

#include "ivxj/panel.hpp"

namespace ivxj {

Panel read_panel_csv(const std::string& path);
Panel read_panel_csv(std::istream& in, const std::string& origin = "<stream>");

void write_panel_csv(const Panel& panel, const std::string& path);
void write_panel_csv(const Panel& panel, std::ostream& out);

}  // namespace ivxj
