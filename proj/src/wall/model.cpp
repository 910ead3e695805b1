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

#include "sume/wall/wall.hpp"

namespace sume::wall {

std::string_view kind_name(WindowKind kind) { return kind == WindowKind::Slideshow ? "slideshow" : "normal"; }

const Window* SceneSnapshot::find(std::uint32_t id) const {
    for (const auto& w : windows) {
        if (w.id == id) return &w;
    }
    return nullptr;
}

std::int64_t SceneSnapshot::visible_area(std::uint32_t id) const {
    std::int64_t total = 0;
    for (const auto& screen : screens) {
        for (const auto& r : screen) {
            if (r.window_id == id) total += r.local.area();
        }
    }
    return total;
}

WallModel::WallModel(WallConfig config) : config_(config) { config_.validate(); }

std::uint64_t WallModel::revision() const {
    std::lock_guard lock(mu_);
    return revision_;
}

std::uint32_t WallModel::place_window(const Rect& rect, WindowContent content, WindowKind kind) {
    if (rect.width < 0 || rect.height < 0) {
        throw WallError(WallError::Kind::InvalidArgument, "window size must not be negative");
    }
    std::uint32_t id;
    std::uint64_t rev;
    {
        std::lock_guard lock(mu_);
        std::int32_t z = 0;
        for (const auto& [wid, w] : windows_) z = std::max(z, w.z + 1);
        id = next_id_++;
        windows_[id] = Window{id, rect, z, true, kind, std::move(content)};
        rev = ++revision_;
    }
    notify(rev);
    return id;
}

template <typename Fn>
void WallModel::mutate(std::uint32_t id, Fn&& fn) {
    std::uint64_t rev;
    {
        std::lock_guard lock(mu_);
        auto it = windows_.find(id);
        if (it == windows_.end()) {
            throw WallError(WallError::Kind::UnknownWindow, "unknown window " + std::to_string(id));
        }
        fn(it->second);
        rev = ++revision_;
    }
    notify(rev);
}

void WallModel::set_rect(std::uint32_t id, const Rect& rect) {
    if (rect.width < 0 || rect.height < 0) {
        throw WallError(WallError::Kind::InvalidArgument, "window size must not be negative");
    }
    mutate(id, [&](Window& w) { w.rect = rect; });
}

void WallModel::set_x(std::uint32_t id, std::int64_t x) {
    mutate(id, [&](Window& w) { w.rect.x = x; });
}

void WallModel::set_y(std::uint32_t id, std::int64_t y) {
    mutate(id, [&](Window& w) { w.rect.y = y; });
}

void WallModel::set_width(std::uint32_t id, std::int64_t width) {
    if (width < 0) throw WallError(WallError::Kind::InvalidArgument, "width must not be negative");
    mutate(id, [&](Window& w) { w.rect.width = width; });
}

void WallModel::set_height(std::uint32_t id, std::int64_t height) {
    if (height < 0) throw WallError(WallError::Kind::InvalidArgument, "height must not be negative");
    mutate(id, [&](Window& w) { w.rect.height = height; });
}

void WallModel::set_z(std::uint32_t id, std::int32_t z) {
    std::uint64_t rev;
    {
        std::lock_guard lock(mu_);
        auto it = windows_.find(id);
        if (it == windows_.end()) {
            throw WallError(WallError::Kind::UnknownWindow, "unknown window " + std::to_string(id));
        }
        for (const auto& [wid, w] : windows_) {
            if (wid != id && w.z == z) {
                throw WallError(WallError::Kind::ZTaken,
                                "z " + std::to_string(z) + " is taken by window " + std::to_string(wid));
            }
        }
        it->second.z = z;
        rev = ++revision_;
    }
    notify(rev);
}

void WallModel::set_visible(std::uint32_t id, bool visible) {
    mutate(id, [&](Window& w) { w.visible = visible; });
}

void WallModel::set_content(std::uint32_t id, WindowContent content) {
    mutate(id, [&](Window& w) { w.content = std::move(content); });
}

void WallModel::close(std::uint32_t id) {
    std::uint64_t rev;
    {
        std::lock_guard lock(mu_);
        if (!windows_.erase(id)) {
            throw WallError(WallError::Kind::UnknownWindow, "unknown window " + std::to_string(id));
        }
        rev = ++revision_;
    }
    notify(rev);
}

bool WallModel::contains(std::uint32_t id) const {
    std::lock_guard lock(mu_);
    return windows_.count(id) > 0;
}

std::optional<Window> WallModel::window(std::uint32_t id) const {
    std::lock_guard lock(mu_);
    auto it = windows_.find(id);
    if (it == windows_.end()) return std::nullopt;
    return it->second;
}

std::size_t WallModel::window_count() const {
    std::lock_guard lock(mu_);
    return windows_.size();
}

SceneSnapshot WallModel::render() const {
    SceneSnapshot scene;
    {
        std::lock_guard lock(mu_);
        scene.config = config_;
        scene.revision = revision_;
        for (const auto& [id, w] : windows_) scene.windows.push_back(w);
    }
    std::sort(scene.windows.begin(), scene.windows.end(), [](const Window& a, const Window& b) { return a.z < b.z; });
    scene.screens.resize(static_cast<std::size_t>(config_.screen_count()));
    const Rect canvas = config_.canvas();
    for (std::size_t k = 0; k < scene.windows.size(); ++k) {
        const Window& w = scene.windows[k];
        if (!w.visible) continue;
        std::vector<Rect> pieces;
        Rect base = intersect(w.rect, canvas);
        if (!base.empty()) pieces.push_back(base);
        for (std::size_t j = k + 1; j < scene.windows.size() && !pieces.empty(); ++j) {
            const Window& above = scene.windows[j];
            if (!above.visible || above.rect.empty()) continue;
            std::vector<Rect> next;
            for (const auto& p : pieces) {
                auto rest = subtract(p, above.rect);
                next.insert(next.end(), rest.begin(), rest.end());
            }
            pieces.swap(next);
        }
        for (const auto& p : pieces) {
            for (const auto& part : clip_to_screens(config_, p)) {
                scene.screens[static_cast<std::size_t>(part.screen)].push_back({w.id, part.local});
            }
        }
    }
    return scene;
}

int WallModel::add_listener(Listener listener) {
    std::lock_guard lock(listeners_mu_);
    int token = next_listener_++;
    listeners_[token] = std::move(listener);
    return token;
}

void WallModel::remove_listener(int token) {
    std::lock_guard lock(listeners_mu_);
    listeners_.erase(token);
}

void WallModel::notify(std::uint64_t revision) {
    std::vector<Listener> targets;
    {
        std::lock_guard lock(listeners_mu_);
        for (const auto& [token, l] : listeners_) targets.push_back(l);
    }
    for (const auto& l : targets) l(revision);
}

}  // namespace sume::wall
