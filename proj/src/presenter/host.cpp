/*
 * Copyright (C) 2026 The SUME Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>

#include <json.hpp>

#include "presenter_idl.inc"
#include "sume/presenter/presenter.hpp"

namespace sume::presenter {

namespace fs = std::filesystem;

std::string_view presenter_idl() { return kPresenterIdl; }

PresenterHost::PresenterHost(std::shared_ptr<wall::WallModel> wall, fs::path content_root)
    : wall_(std::move(wall)), content_root_(std::move(content_root)) {}

std::optional<fs::path> PresenterHost::resolve(std::string_view file_name) const {
    if (file_name.empty()) return std::nullopt;
    std::error_code ec;
    fs::path root = fs::weakly_canonical(content_root_, ec);
    if (ec) return std::nullopt;
    fs::path requested(file_name);
    fs::path candidate = fs::weakly_canonical(requested.is_absolute() ? requested : root / requested, ec);
    if (ec) return std::nullopt;
    auto [r, c] = std::mismatch(root.begin(), root.end(), candidate.begin(), candidate.end());
    if (r != root.end()) return std::nullopt;
    if (!fs::is_regular_file(candidate, ec)) return std::nullopt;
    return candidate;
}

std::string PresenterHost::list_decks() const {
    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(content_root_, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".deck") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    auto out = nlohmann::json::array();
    for (const auto& f : files) {
        try {
            Deck deck = load_deck(f);
            out.push_back({{"file", f.filename().string()},
                           {"title", deck.title},
                           {"slides", deck.slides.size()}});
        } catch (const DeckError& e) {
            out.push_back({{"file", f.filename().string()}, {"error", e.what()}});
        }
    }
    return out.dump();
}

void PresenterHost::register_window(std::uint32_t window_id, WindowBinding binding) {
    windows_[window_id] = std::move(binding);
}

void PresenterHost::unregister_window(std::uint32_t window_id) { windows_.erase(window_id); }

std::shared_ptr<SlideShowViewImpl> PresenterHost::find_show(std::uint32_t window_id) const {
    auto it = windows_.find(window_id);
    return it == windows_.end() ? nullptr : it->second.view.lock();
}

void PresenterHost::close_window(std::uint32_t window_id) {
    auto it = windows_.find(window_id);
    if (it != windows_.end() && it->second.close) {
        auto close = it->second.close;
        close();
        return;
    }
    wall_->close(window_id);
}

int PresenterHost::add_slide_listener(SlideListener listener) {
    int token = next_listener_++;
    slide_listeners_[token] = std::move(listener);
    return token;
}

void PresenterHost::remove_slide_listener(int token) { slide_listeners_.erase(token); }

void PresenterHost::notify_slide(std::uint32_t window_id, int index) {
    auto targets = slide_listeners_;
    for (const auto& [token, l] : targets) l(window_id, index);
}

}  // namespace sume::presenter
