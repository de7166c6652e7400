import { ApiClient } from "./api.js";
import { bindKeys } from "./keyboard.js";
import { renderPrevalence } from "./prevalence.js";
import { ReviewSession } from "./session.js";

const PREVALENCE_POLL_MS = 10_000;
const RETRY_POLL_MS = 5_000;

function el(id: string): HTMLElement {
    const node = document.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node;
}

function renderPost(session: ReviewSession): void {
    const post = session.current();
    const counter = el("cursor");
    const text = el("post-text");
    const postId = el("post-id");
    if (post) {
        counter.textContent = `${session.cursor + 1} / ${session.posts.length}`;
        text.textContent = post.text;
        postId.textContent = post.post_id;
    } else if (session.done()) {
        counter.textContent = `${session.posts.length} / ${session.posts.length}`;
        text.textContent = "cluster sample finished - pick another cluster";
        postId.textContent = "";
    } else {
        counter.textContent = "-";
        text.textContent = "load a cluster sample to start labeling";
        postId.textContent = "";
    }
}

function renderLabels(session: ReviewSession): void {
    const list = el("labels");
    list.innerHTML = "";
    if (!session.taxonomy) return;
    session.taxonomy.labels.forEach((label, i) => {
        const item = document.createElement("li");
        item.textContent = `[${i + 1}] ${label}`;
        list.appendChild(item);
    });
    const skip = document.createElement("li");
    skip.textContent = `[s] skip (${session.taxonomy.sentinel})`;
    list.appendChild(skip);
}

function showBanner(message: string | null): void {
    const banner = el("banner");
    if (message) {
        banner.textContent = message;
        banner.classList.remove("hidden");
    } else {
        banner.classList.add("hidden");
    }
}

async function start(): Promise<void> {
    const api = new ApiClient("");
    const session = new ReviewSession(api, "ui", {
        onUpdate: () => {
            renderPost(session);
            renderPrevalence(el("prevalence"), session.prevalence);
            showBanner(session.offline ? "service unreachable - retrying queued submissions" : null);
        },
        onError: (message) => showBanner(message),
    });

    await session.init();
    renderLabels(session);

    const info = await api.clusters();
    const picker = el("cluster-picker");
    for (let c = 0; c < info.k; c++) {
        const button = document.createElement("button");
        button.textContent = `cluster ${c} (${info.sizes[c]})`;
        button.addEventListener("click", () => void session.loadSample(c, 100, 0));
        picker.appendChild(button);
    }

    bindKeys(session);
    renderPost(session);
    renderPrevalence(el("prevalence"), session.prevalence);

    setInterval(() => void session.refreshPrevalence(), PREVALENCE_POLL_MS);
    setInterval(() => void session.flushQueue(), RETRY_POLL_MS);
}

start().catch((err) => showBanner(`failed to start: ${err}`));
