import type { ReviewSession } from "./session.js";

const IGNORED_TAGS = new Set(["INPUT", "TEXTAREA", "SELECT"]);

/** Keyboard-first labeling: digits 1..9 pick the taxonomy label, "s" skips.
 *  Returns the unbind function. */
export function bindKeys(session: ReviewSession, target: Window = window): () => void {
    const handler = (event: KeyboardEvent) => {
        const el = event.target as HTMLElement | null;
        if (el && (IGNORED_TAGS.has(el.tagName) || el.isContentEditable)) {
            return;
        }
        const key = event.key.toLowerCase();
        if (key >= "1" && key <= "9") {
            event.preventDefault();
            void session.labelByIndex(Number(key));
        } else if (key === "s") {
            event.preventDefault();
            void session.skip();
        }
    };
    target.addEventListener("keydown", handler as EventListener);
    return () => target.removeEventListener("keydown", handler as EventListener);
}
