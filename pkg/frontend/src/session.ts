import type { ApiClient, AnnotationBody, PrevalenceTable, SamplePost, Taxonomy } from "./api.js";

export type LabelOutcome =
    | { kind: "accepted"; label: string }
    | { kind: "rejected"; detail: string }
    | { kind: "queued"; label: string }
    | { kind: "done" };

export interface SessionEvents {
    onUpdate?: () => void;
    onError?: (message: string) => void;
}

/** Review state machine: one sampled post at a time, keyboard labels 1..n,
 *  skip via the sentinel. Cursor advances on acknowledgment; a rejection
 *  (422) leaves it unchanged; network failures queue the submission for
 *  retry and advance optimistically so the annotator is never blocked. */
export class ReviewSession {
    taxonomy: Taxonomy | null = null;
    posts: SamplePost[] = [];
    cursor = 0;
    cluster = 0;
    dataset: string | undefined;
    prevalence: PrevalenceTable | null = null;
    queue: AnnotationBody[] = [];
    offline = false;

    constructor(
        private api: ApiClient,
        public annotator = "ui",
        private events: SessionEvents = {},
    ) {}

    async init(): Promise<void> {
        this.taxonomy = await this.api.taxonomy();
        await this.refreshPrevalence();
    }

    async loadSample(cluster: number, n = 100, seed = 0): Promise<void> {
        const sample = await this.api.sample(cluster, n, seed);
        this.cluster = sample.cluster;
        this.posts = sample.posts;
        this.cursor = 0;
        this.events.onUpdate?.();
    }

    current(): SamplePost | null {
        return this.cursor < this.posts.length ? this.posts[this.cursor] : null;
    }

    done(): boolean {
        return this.posts.length > 0 && this.cursor >= this.posts.length;
    }

    /** Label the current post with the 1-based taxonomy index (keyboard keys 1..7). */
    async labelByIndex(index: number): Promise<LabelOutcome> {
        if (!this.taxonomy || index < 1 || index > this.taxonomy.labels.length) {
            return { kind: "rejected", detail: `no label bound to key ${index}` };
        }
        return this.labelWith(this.taxonomy.labels[index - 1]);
    }

    /** Skip: submit the sentinel so the post counts toward the sampled total only. */
    async skip(): Promise<LabelOutcome> {
        if (!this.taxonomy) {
            return { kind: "rejected", detail: "taxonomy not loaded" };
        }
        return this.labelWith(this.taxonomy.sentinel);
    }

    async labelWith(label: string): Promise<LabelOutcome> {
        const post = this.current();
        if (!post) {
            return { kind: "done" };
        }
        const body: AnnotationBody = {
            post_id: post.post_id,
            cluster: this.cluster,
            label,
            annotator: this.annotator,
        };
        let result;
        try {
            result = await this.api.submitAnnotation(body);
        } catch {
            this.queue.push(body);
            this.offline = true;
            this.cursor += 1;
            this.events.onError?.("service unreachable; submission queued");
            this.events.onUpdate?.();
            return { kind: "queued", label };
        }
        if (!result.ok) {
            this.events.onError?.(result.detail);
            return { kind: "rejected", detail: result.detail };
        }
        this.offline = false;
        this.cursor += 1;
        await this.refreshPrevalence();
        this.events.onUpdate?.();
        return { kind: "accepted", label };
    }

    /** Retry queued submissions in order; stops at the first network failure. */
    async flushQueue(): Promise<number> {
        let flushed = 0;
        while (this.queue.length > 0) {
            const body = this.queue[0];
            let result;
            try {
                result = await this.api.submitAnnotation(body);
            } catch {
                this.offline = true;
                return flushed;
            }
            // rejected submissions are dropped; queued retries only cover outages
            this.queue.shift();
            if (result.ok) {
                flushed += 1;
            }
        }
        this.offline = false;
        if (flushed > 0) {
            await this.refreshPrevalence();
            this.events.onUpdate?.();
        }
        return flushed;
    }

    async refreshPrevalence(): Promise<void> {
        try {
            this.prevalence = await this.api.prevalence(this.dataset);
        } catch {
            this.offline = true;
            this.events.onError?.("service unreachable; prevalence is stale");
            return;
        }
        this.events.onUpdate?.();
    }
}
