// Copyright 2026 The sempol Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "sempol/error.hpp"
#include "sempol/pipeline.hpp"

namespace sempol {

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::string line_chart_svg(const std::string& title, const std::vector<std::string>& x_labels,
                           const std::vector<ChartSeries>& series) {
    constexpr double width = 720, height = 360, left = 60, right = 160, top = 40, bottom = 50;
    const double plot_w = width - left - right, plot_h = height - top - bottom;

    double lo = INFINITY, hi = -INFINITY;
    for (const auto& s : series) {
        for (double v : s.values) {
            if (std::isfinite(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
    }
    if (!std::isfinite(lo)) lo = hi = 0.0;
    if (hi - lo < 1e-9) {
        lo -= 0.05;
        hi += 0.05;
    }
    const auto n = x_labels.size();
    auto x_at = [&](std::size_t i) { return left + (n > 1 ? plot_w * double(i) / double(n - 1) : plot_w / 2); };
    auto y_at = [&](double v) { return top + plot_h * (hi - v) / (hi - lo); };

    std::ostringstream svg;
    svg << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">)",
                       width, height, width, height)
        << '\n';
    svg << R"(<rect width="100%" height="100%" fill="white"/>)" << '\n';
    svg << fmt::format(R"(<text x="{}" y="24" font-family="sans-serif" font-size="15">{}</text>)", left,
                       xml_escape(title))
        << '\n';
    svg << fmt::format(R"(<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="black"/>)", left, top, top + plot_h)
        << '\n';
    svg << fmt::format(R"(<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="black"/>)", left, top + plot_h,
                       left + plot_w)
        << '\n';
    for (int t = 0; t <= 4; ++t) {
        const double v = lo + (hi - lo) * t / 4.0;
        svg << fmt::format(
                   R"(<text x="{}" y="{:.1f}" font-family="sans-serif" font-size="10" text-anchor="end">{:.3f}</text>)",
                   left - 6, y_at(v) + 3, v)
            << '\n';
    }
    const std::size_t stride = std::max<std::size_t>(1, n / 12);
    for (std::size_t i = 0; i < n; i += stride) {
        svg << fmt::format(
                   R"(<text x="{:.1f}" y="{}" font-family="sans-serif" font-size="10" text-anchor="middle">{}</text>)",
                   x_at(i), top + plot_h + 16, xml_escape(x_labels[i]))
            << '\n';
    }
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto* color = kPalette[k % std::size(kPalette)];
        svg << fmt::format(R"(<polyline fill="none" stroke="{}" stroke-width="2" points=")", color);
        for (std::size_t i = 0; i < series[k].values.size() && i < n; ++i) {
            svg << (i ? " " : "") << fmt::format("{:.2f},{:.2f}", x_at(i), y_at(series[k].values[i]));
        }
        svg << "\"/>\n";
        const double ly = top + 14 + 18.0 * double(k);
        svg << fmt::format(R"(<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="{3}" stroke-width="2"/>)",
                           left + plot_w + 12, ly, left + plot_w + 32, color)
            << '\n';
        svg << fmt::format(R"(<text x="{}" y="{}" font-family="sans-serif" font-size="11">{}</text>)",
                           left + plot_w + 38, ly + 4, xml_escape(series[k].label))
            << '\n';
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot read '" + path.string() + "' for hashing");
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        fail(ErrorCode::Io, "SHA-256 unavailable");
    }
    char buffer[1 << 16];
    while (in.read(buffer, sizeof buffer) || in.gcount() > 0) {
        EVP_DigestUpdate(ctx, buffer, static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

void update_manifest(const RunConfig& config, const std::vector<std::string>& outputs) {
    const auto path = config.output_dir / "manifest.json";
    nlohmann::json manifest = nlohmann::json::object();
    if (std::ifstream in(path); in) {
        manifest = nlohmann::json::parse(in, nullptr, false);
        if (manifest.is_discarded() || !manifest.is_object()) manifest = nlohmann::json::object();
    }
    if (!manifest.contains("files")) manifest["files"] = nlohmann::json::object();
    for (const auto& rel : outputs) {
        const auto file = config.output_dir / rel;
        manifest["files"][rel] = {{"sha256", sha256_file(file)},
                                  {"bytes", static_cast<std::uint64_t>(std::filesystem::file_size(file))}};
    }
    manifest["config"] = config.document;
    std::ofstream out(path);
    out << manifest.dump(2) << '\n';
    if (!out) fail(ErrorCode::Io, "cannot write '" + path.string() + "'");
}

}  // namespace sempol
