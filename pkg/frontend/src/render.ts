// three.js bindings: one persistent scene whose objects are rebuilt from
// the SceneDescription each animation frame. Interpolation between 30 Hz
// snapshots is cosmetic only; all state lives on the server.

import * as THREE from "three";
import { SceneDescription } from "./scene.js";

const BODY_COLOR = 0x3a7bd5;
const STANCE_COLOR = 0x2ecc71;
const SWING_COLOR = 0xf39c12;
const FAULT_COLOR = 0xe74c3c;

export class RobotView {
  readonly scene = new THREE.Scene();
  readonly camera: THREE.PerspectiveCamera;
  private renderer: THREE.WebGLRenderer;
  private dynamic = new THREE.Group();

  constructor(canvas: HTMLCanvasElement) {
    this.renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
    this.camera = new THREE.PerspectiveCamera(50, 1, 0.01, 50);
    this.camera.up.set(0, 0, 1); // world z is up
    this.scene.background = new THREE.Color(0x10141a);

    const grid = new THREE.GridHelper(4, 40, 0x335577, 0x223344);
    grid.rotation.x = Math.PI / 2; // GridHelper is xz by default
    this.scene.add(grid);
    this.scene.add(new THREE.AmbientLight(0xffffff, 0.7));
    const sun = new THREE.DirectionalLight(0xffffff, 1.2);
    sun.position.set(1, 1, 2);
    this.scene.add(sun);
    this.scene.add(this.dynamic);
    this.resize();
  }

  resize(): void {
    const canvas = this.renderer.domElement;
    const w = canvas.clientWidth || 800;
    const h = canvas.clientHeight || 600;
    this.renderer.setSize(w, h, false);
    this.camera.aspect = w / h;
    this.camera.updateProjectionMatrix();
  }

  draw(desc: SceneDescription): void {
    this.dynamic.clear();

    // body slab
    const [bx, by, bz] = desc.bodyCenter;
    const body = new THREE.Mesh(
      new THREE.BoxGeometry(0.3, 0.175, 0.05),
      new THREE.MeshStandardMaterial({ color: BODY_COLOR }),
    );
    body.position.set(bx, by, bz);
    body.rotation.z = desc.heading;
    this.dynamic.add(body);

    // legs: hip link, upper, lower segments plus a foot ball
    for (const leg of desc.legs) {
      const color = leg.faulted ? FAULT_COLOR : leg.stance ? STANCE_COLOR : SWING_COLOR;
      const mat = new THREE.LineBasicMaterial({ color, linewidth: 2 });
      const pts = leg.points.map(([x, y, z]) => new THREE.Vector3(x, y, z));
      this.dynamic.add(new THREE.Line(new THREE.BufferGeometry().setFromPoints(pts), mat));
      const foot = new THREE.Mesh(
        new THREE.SphereGeometry(0.012),
        new THREE.MeshStandardMaterial({ color }),
      );
      foot.position.copy(pts[3]);
      this.dynamic.add(foot);
    }

    // support polygon + CoM projection
    if (desc.supportPolygon.length >= 3) {
      const loop = [...desc.supportPolygon, desc.supportPolygon[0]].map(
        ([x, y, z]) => new THREE.Vector3(x, y, z),
      );
      this.dynamic.add(
        new THREE.Line(
          new THREE.BufferGeometry().setFromPoints(loop),
          new THREE.LineBasicMaterial({ color: 0x88ccff }),
        ),
      );
    }
    if (desc.comDot) {
      const inMargin = (desc.comMargin ?? 0) > 0;
      const dot = new THREE.Mesh(
        new THREE.SphereGeometry(0.01),
        new THREE.MeshBasicMaterial({ color: inMargin ? 0x88ccff : FAULT_COLOR }),
      );
      dot.position.set(...desc.comDot);
      this.dynamic.add(dot);
    }

    // odometry trail
    if (desc.trail.length > 1) {
      const pts = desc.trail.map(([x, y, z]) => new THREE.Vector3(x, y, z));
      this.dynamic.add(
        new THREE.Line(
          new THREE.BufferGeometry().setFromPoints(pts),
          new THREE.LineBasicMaterial({ color: 0x556677 }),
        ),
      );
    }

    // follow camera
    this.camera.position.set(bx - 0.7 * Math.cos(desc.heading - 0.5), by - 0.7 * Math.sin(desc.heading - 0.5), 0.45);
    this.camera.lookAt(bx, by, 0.1);
    this.renderer.render(this.scene, this.camera);
  }
}
