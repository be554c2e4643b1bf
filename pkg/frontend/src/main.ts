import { ApiClient } from "./api.js";
import { App } from "./app.js";

const app = new App(new ApiClient(""));
document.getElementById("app")?.appendChild(app.root);
void app.start();
