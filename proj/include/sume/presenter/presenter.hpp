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

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "sume/orb/registry.hpp"
#include "sume/presenter/deck.hpp"
#include "sume/wall/wall.hpp"

namespace sume::presenter {

/// The shipped `presenter.sidl`.
std::string_view presenter_idl();

class SlideShowViewImpl;

/// State shared by every presenter component of one server: the wall, the
/// deck directory and the slideshow windows that wall-level control may
/// steer. Components use it only from dispatch, so it needs no locking of
/// its own beyond what WallModel does.
class PresenterHost {
public:
    PresenterHost(std::shared_ptr<wall::WallModel> wall, std::filesystem::path content_root);

    wall::WallModel& wall() { return *wall_; }
    const std::filesystem::path& content_root() const { return content_root_; }

    /// Resolves a deck name inside the content root; nullopt if it would
    /// escape the root or does not name a regular file.
    std::optional<std::filesystem::path> resolve(std::string_view file_name) const;

    /// Decks found in the content root as a JSON array of
    /// {"file", "title", "slides"} (or {"file", "error"}), sorted by file.
    std::string list_decks() const;

    /// How wall-level control reaches the component that owns a window.
    struct WindowBinding {
        /// Empty for windows that are not slideshows.
        std::weak_ptr<SlideShowViewImpl> view;
        /// Closes the window the way its owner would.
        std::function<void()> close;
    };
    void register_window(std::uint32_t window_id, WindowBinding binding);
    void unregister_window(std::uint32_t window_id);
    /// Live view showing `window_id`, or nullptr.
    std::shared_ptr<SlideShowViewImpl> find_show(std::uint32_t window_id) const;
    /// Closes through the owner when there is one. Throws WallError for an
    /// unknown window.
    void close_window(std::uint32_t window_id);

    using SlideListener = std::function<void(std::uint32_t window_id, int index)>;
    int add_slide_listener(SlideListener listener);
    void remove_slide_listener(int token);
    void notify_slide(std::uint32_t window_id, int index);

private:
    std::shared_ptr<wall::WallModel> wall_;
    std::filesystem::path content_root_;
    std::map<std::uint32_t, WindowBinding> windows_;
    int next_listener_ = 1;
    std::map<int, SlideListener> slide_listeners_;
};

/// Sealed registry with "Presenter.Application" and "Presenter.Wall" bound
/// to `host`.
std::shared_ptr<orb::Registry> make_presenter_registry(std::shared_ptr<PresenterHost> host);

}  // namespace sume::presenter
