export interface Taxonomy {
    labels: string[];
    sentinel: string;
}

export interface ClustersInfo {
    k: number;
    inertia: number;
    seed: number;
    sizes: number[];
}

export interface SamplePost {
    post_id: string;
    text: string;
}

export interface SampleResponse {
    cluster: number;
    seed: number;
    posts: SamplePost[];
}

export interface PrevalenceRow {
    label: string;
    count: number;
    percentage: number;
}

export interface PrevalenceTable {
    rows: PrevalenceRow[];
    total_labeled: number;
    total_sampled: number;
}

export interface AnnotationBody {
    post_id: string;
    cluster: number;
    label: string;
    annotator: string;
}

export type SubmitResult =
    | { ok: true }
    | { ok: false; status: number; detail: string };

/** Thin typed client for the /v1 annotation API. Network failures throw;
 *  HTTP rejections (422) are returned as values so callers can distinguish. */
export class ApiClient {
    constructor(public baseUrl = "") {}

    private async getJson<T>(path: string): Promise<T> {
        const response = await fetch(this.baseUrl + path);
        if (!response.ok) {
            throw new Error(`GET ${path} failed: ${response.status}`);
        }
        return response.json() as Promise<T>;
    }

    taxonomy(): Promise<Taxonomy> {
        return this.getJson("/v1/taxonomy");
    }

    clusters(): Promise<ClustersInfo> {
        return this.getJson("/v1/clusters");
    }

    sample(cluster: number, n: number, seed: number): Promise<SampleResponse> {
        return this.getJson(`/v1/clusters/${cluster}/sample?n=${n}&seed=${seed}`);
    }

    prevalence(dataset?: string): Promise<PrevalenceTable> {
        const query = dataset ? `?dataset=${encodeURIComponent(dataset)}` : "";
        return this.getJson(`/v1/prevalence${query}`);
    }

    async submitAnnotation(body: AnnotationBody): Promise<SubmitResult> {
        const response = await fetch(`${this.baseUrl}/v1/annotations`, {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify(body),
        });
        if (response.status === 201) {
            return { ok: true };
        }
        let detail = `status ${response.status}`;
        try {
            const payload = await response.json();
            if (typeof payload.detail === "string") {
                detail = payload.detail;
            }
        } catch {
            // non-JSON error body; keep the status text
        }
        return { ok: false, status: response.status, detail };
    }
}
